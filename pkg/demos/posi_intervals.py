"""
Simultaneous intervals valid after selection
============================================

The (1 - alpha) quantile of the same max-|t| distribution gives a single
multiplier for all coefficients.  The box covers every coordinate of beta
simultaneously, so any sub-model chosen after looking at the data inherits
the coverage.
"""

import numpy as np

from imvs import build, center, fit, load_prostate, posi_region, univariate_t_cdf

theta = fit(center(load_prostate()))
dist = build(theta.L, theta.nu, B=200_000, seed=3)
region = posi_region(theta, dist, alpha=0.05)

# Compare the simultaneous multiplier with the usual marginal t quantile.
lo, hi = 0.0, 10.0
for _ in range(60):
    mid = 0.5 * (lo + hi)
    lo, hi = (mid, hi) if univariate_t_cdf(mid, theta.nu) < 0.975 else (lo, mid)
print(f"simultaneous k = {region.k_alpha:.3f}, marginal t quantile = {hi:.3f}")

for name, b, (l, u) in zip(theta.names, theta.beta_hat, region.beta_intervals):
    flag = "" if l <= 0 <= u else "  excludes 0"
    print(f"{name:>8} {b:8.4f}  [{l:8.4f}, {u:8.4f}]{flag}")

# Projecting onto a chosen sub-model just keeps its rows.
chosen = [theta.names.index("lcavol"), theta.names.index("svi")]
print(np.round(region.project(chosen), 4))
