"""
Selecting variables for the prostate cancer data
================================================

Fit the full linear model for log PSA, rank predictors by |t|, and read off
the plausibility of every nested model along that ranking.
"""

from imvs import build, center, fit, load_prostate, model_plausibility, plausibility_table, select

# The bundled data are 97 men, eight log-scale clinical predictors.
data = center(load_prostate())
theta = fit(data)
print(f"n={data.n} p={data.p} nu={theta.nu}")

# F is the distribution of the largest absolute coordinate of a
# multivariate t with the fitted correlation matrix.  A million draws keeps
# the Monte Carlo error near 5e-4.
dist = build(theta.L, theta.nu, B=1_000_000, seed=1)

table = plausibility_table(theta, dist)
print(f"{'variable':>8} {'|T|':>7} {'eta':>7}")
for name, t, eta in zip(table.names_ordered, table.abs_t_sorted, table.eta):
    print(f"{name:>8} {t:7.3f} {eta:7.4f}")

# The selected model is the smallest nested model whose plausibility still
# exceeds alpha.
result = select(table, alpha=0.05)
print("selected at alpha=0.05:", result.selected_names)

# Plausibility of arbitrary sub-models is available too.
names = list(theta.names)
for model in (["lcavol"], ["lcavol", "svi"], ["lcavol", "lweight", "svi"]):
    idx = [names.index(v) for v in model]
    print(f"pl({'+'.join(model)}) = {model_plausibility(theta, dist, idx):.4f}")

# Smaller alpha asks for less evidence against dropped variables.
for alpha in (0.01, 0.05, 0.2, 0.5):
    print(alpha, select(table, alpha).selected_names)
