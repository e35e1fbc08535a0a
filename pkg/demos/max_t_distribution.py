"""
The distribution of the largest |t|
===================================

Check the Monte Carlo cdf against two cases with closed forms: one
dimension, where it is a two-sided t probability, and independent
coordinates with huge degrees of freedom, where it is a power of a
Gaussian probability.
"""

import math

import numpy as np

from imvs import build, univariate_t_cdf

B = 100_000
for nu in (5, 30, 95):
    dist = build(np.eye(1), nu, B, seed=nu)
    for c in (0.5, 1.0, 2.0, 3.0):
        exact = 2 * univariate_t_cdf(c, nu) - 1
        se = math.sqrt(exact * (1 - exact) / B)
        print(f"nu={nu:3d} c={c}: mc={dist.cdf(c):.4f} exact={exact:.4f} ({(dist.cdf(c) - exact) / se:+.2f} se)")

dist = build(np.eye(3), 10_000, B, seed=11)
print("gaussian limit:", round(dist.cdf(2.0), 4), "vs", round(math.erf(2 / math.sqrt(2)) ** 3, 4))

# Correlation shrinks the maximum: the more alike the coordinates, the
# closer the max is to a single |t|.
for rho in (0.0, 0.5, 0.9):
    L = rho ** np.abs(np.subtract.outer(np.arange(8), np.arange(8)))
    print(f"rho={rho}: 95% point = {build(L, 50, B, seed=2).quantile(0.95):.3f}")
