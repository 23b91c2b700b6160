"""Noise response and the object-domain padding transition.

First sweep: reconstruction error versus noise-to-signal ratio; the error
grows linearly in the noise (slope near 2-3 at this scale; the full-scale
reference slope is about 2.2).  Second sweep: the object-domain iteration
stagnates at the standard padding ratio ntilde/n = 4 but matches the
Fourier-domain iteration when ntilde reaches the full measurement
dimension, exhibiting the padding phase transition.

Run:  python3 demos/05_noise_and_padding.py   (a couple of minutes; writes demo_out/*.csv)
"""

import pathlib

from phasedr import ExperimentConfig, GridShape, ImageSpec, SolverConfig
from phasedr.experiments import run_noise_sweep, run_padding_sweep

out = pathlib.Path("demo_out")
out.mkdir(exist_ok=True)

noise_cfg = ExperimentConfig(
    experiment="noise-sweep",
    image=ImageSpec(kind="rpp", shape=GridShape((8, 8)), margin=1),
    variant="one-and-half",
    trials=3,
    base_seed=1,
    nsr_grid=(0.0, 0.01, 0.02, 0.05, 0.1, 0.2),
    solver=SolverConfig(algorithm="fdr", max_iters=1000, tol=1e-10),
    out=str(out / "noise_sweep.csv"),
)
noise = run_noise_sweep(noise_cfg)
budget = noise.budgets[1]
print("noise sweep (median relative error at the larger budget):")
for nsr in noise_cfg.nsr_grid:
    print(f"  NSR {nsr:4.0%} -> {noise.medians[(nsr, budget)]:.2e}")
print(f"fitted slope {noise.slopes[budget]:.2f} "
      "(error grows linearly with the noise; reference 2.2 at 256x256)")

# the transition shows cleanly at 16x16: the standard padding ratio stalls
# within this budget while full padding (= the Fourier-domain iteration)
# converges
pad_cfg = ExperimentConfig(
    experiment="padding-sweep",
    image=ImageSpec(kind="rpp", shape=GridShape((16, 16)), margin=1),
    variant="one-and-half",
    trials=3,
    base_seed=2,
    ntilde_ratios=(4.0, 6.0, 8.0),
    solver=SolverConfig(algorithm="fdr", max_iters=500, tol=1e-9),
    out=str(out / "padding_sweep.csv"),
)
pad = run_padding_sweep(pad_cfg)
print("\npadding sweep (object-domain DR, 500 iterations, random init):")
for ratio in pad_cfg.ntilde_ratios:
    print(f"  ntilde/n = {ratio:3.1f} -> mean error {pad.mean_error[ratio]:.2e}, "
          f"success rate {pad.success_rate[ratio]:.0%}")
print(f"success is monotone in the padding ratio (rank correlation "
      f"{pad.trend_correlation:+.2f}); the ntilde = N runs are the FDR runs, bit for bit")
