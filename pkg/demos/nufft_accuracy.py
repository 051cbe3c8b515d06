"""Accuracy and speed of the fast nonuniform evaluation.

Compares the type-II NUFFT against the exact double sum on random
coefficient sets for a range of requested tolerances, then times both at a
production-like size.
"""

import time

import numpy as np

from dfsswe.nufft import NufftPlan, nudft2_direct, nufft2_type2
from dfsswe.transforms import ComplexCoeffs

rng = np.random.default_rng(7)
N = M = 64
targets_th = rng.uniform(0, 2 * np.pi, 1000)
targets_ph = rng.uniform(0, 2 * np.pi, 1000)

print("eps        kernel w   max err / (eps * ||F||_1)")
for eps in (1e-6, 1e-9, 1e-12):
    plan = NufftPlan(N, M, eps=eps)
    worst = 0.0
    for _ in range(5):
        F = rng.standard_normal((2 * N + 1, 2 * M + 1)) * 1j
        F += rng.standard_normal((2 * N + 1, 2 * M + 1))
        c = ComplexCoeffs(N, M, F)
        ref = nudft2_direct(c, targets_th, targets_ph)
        val = nufft2_type2(plan, c, targets_th, targets_ph)
        worst = max(worst, np.abs(val - ref).max() / (eps * np.abs(F).sum()))
    print(f"{eps:.0e}   {plan.w:3d}       {worst:.4f}")

# production-scale timing (J = 256 equivalent)
N = M = 127
plan = NufftPlan(N, M, eps=1e-12)
F = rng.standard_normal((2 * N + 1, 2 * M + 1)) + 0j
c = ComplexCoeffs(N, M, F)
th = rng.uniform(0, 2 * np.pi, 256 * 512)
ph = rng.uniform(0, 2 * np.pi, 256 * 512)
nufft2_type2(plan, c, th, ph)  # warm the jit
t0 = time.perf_counter()
val = nufft2_type2(plan, c, th, ph)
t_fast = time.perf_counter() - t0
t0 = time.perf_counter()
ref = nudft2_direct(c, th[:2000], ph[:2000])
t_dir = (time.perf_counter() - t0) * th.size / 2000
print(f"\nJ=256-scale evaluation: fast {t_fast:.2f} s, direct ~{t_dir:.0f} s "
      f"({t_dir / t_fast:.0f}x speedup)")
