"""
A desk-scale simulation study
=============================

Scenario 1 has seven AR(1)-correlated predictors of which three matter.
Count how often each method returns the true model, a subset of it, a
superset, or something else.  The full study is

    imvs simulate --full-figures --out figures

which takes hours; this script runs a few hundred replicates.
"""

from pathlib import Path

from imvs.simulation import ALL_METHODS, SCENARIOS, report, run, scenario_metadata

scenario = SCENARIOS["1"]
rows = run([scenario], list(ALL_METHODS), ns=[50, 200, 1000], reps=200, master_seed=0)

print(f"{'method':>16} {'n':>5} {'true':>5} {'pars':>5} {'incl':>5} {'other':>5} {'fwer':>6}")
for r in rows:
    print(f"{r.method:>16} {r.n:5d} {r.true:5d} {r.parsimonious:5d} {r.inclusive:5d} {r.other:5d} {r.fwer:6.3f}")

# Results, a four-panel SVG and the run settings land in one directory.
out = Path("sim_demo")
for path in report(rows, out, metadata=scenario_metadata([scenario], reps=200)):
    print("wrote", path)
