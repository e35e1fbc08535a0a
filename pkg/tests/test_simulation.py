import csv
import json
import xml.etree.ElementTree as ET

import numpy as np
import pytest
from hypothesis import given, strategies as st

from imvs import SingularDesign
from imvs import simulation as sim
from imvs.simulation import (SCENARIOS, Outcome, Scenario, SimResult, ar1_cov, classify,
                             generate, load_scenario, report, run)

SVG = "{http://www.w3.org/2000/svg}"


def test_scenario_registry():
    assert sorted(SCENARIOS) == ["1", "2", "3", "4", "5", "6"]
    assert SCENARIOS["1"].beta == (3.0, 1.5, 0.0, 0.0, 2.0, 0.0, 0.0)
    assert SCENARIOS["1"].support == {0, 1, 4}
    assert SCENARIOS["4"].rho == 0.8 and SCENARIOS["4"].support == {0, 1, 2}
    assert SCENARIOS["5"].p == 20 and SCENARIOS["6"].support == set(range(10))
    assert SCENARIOS["2"].with_sigma(2.0).sigma == 2.0
    with pytest.raises(ValueError):
        Scenario("x", (1.0,), 1.0)
    with pytest.raises(ValueError):
        Scenario("x", (1.0,), 0.5, sigma=0.0)


def test_ar1_covariance():
    cov = ar1_cov(4, 0.5)
    assert cov[0, 3] == 0.125 and np.all(np.diag(cov) == 1.0)


def test_generate_moments():
    scenario = SCENARIOS["2"]
    ds = generate(scenario, 20_000, seed=1)
    emp = np.cov(ds.X, rowvar=False)
    np.testing.assert_allclose(emp, ar1_cov(7, 0.8), atol=0.04)
    resid = ds.y - ds.X @ np.array(scenario.beta)
    assert abs(resid.std() - 1.0) < 0.02
    with pytest.raises(ValueError):
        generate(scenario, 8, seed=0)


@pytest.mark.parametrize("selected, outcome", [
    ({0, 1, 4}, Outcome.TRUE),
    ({0, 4}, Outcome.PARSIMONIOUS),
    ((), Outcome.PARSIMONIOUS),
    ({0, 1, 2, 4}, Outcome.INCLUSIVE),
    ({0, 2}, Outcome.OTHER),
])
def test_classify_examples(selected, outcome):
    assert classify(selected, {0, 1, 4}) is outcome


@given(sel=st.frozensets(st.integers(0, 6)), truth=st.frozensets(st.integers(0, 6)))
def test_classify_partition(sel, truth):
    o = classify(sel, truth)
    flags = [sel == truth, sel < truth, sel > truth]
    if any(flags):
        assert o is (Outcome.TRUE, Outcome.PARSIMONIOUS, Outcome.INCLUSIVE)[flags.index(True)]
    else:
        assert o is Outcome.OTHER


def test_single_replicate():
    rows = run([SCENARIOS["1"]], ["IM", "BIC"], [100], reps=1, B=2000, threads=1)
    assert [r.method for r in rows] == ["IM", "BIC"]
    for r in rows:
        assert r.reps == 1 and r.failures == 0
        assert r.true + r.parsimonious + r.inclusive + r.other == 1


def test_run_deterministic_and_thread_independent():
    kw = dict(methods=list(sim.ALL_METHODS), ns=[60], reps=6, B=2000, master_seed=5)
    a = run([SCENARIOS["3"]], threads=1, **kw)
    b = run([SCENARIOS["3"]], threads=3, **kw)
    c = run([SCENARIOS["1"], SCENARIOS["3"]], threads=2, **kw)
    assert [x.row() for x in a] == [x.row() for x in b] == [x.row() for x in c[5:]]
    d = run([SCENARIOS["3"]], threads=1, **{**kw, "master_seed": 6})
    assert [x.row() for x in a] != [x.row() for x in d]


def test_run_rejects_bad_arguments():
    with pytest.raises(ValueError):
        run([SCENARIOS["1"]], [], [100], reps=1)
    with pytest.raises(ValueError):
        run([SCENARIOS["1"]], ["IM"], [100], reps=0)
    with pytest.raises(ValueError):
        run([SCENARIOS["1"]], ["Ridge"], [100], reps=1)


def test_failed_replicates_are_counted(monkeypatch):
    real = sim.im_select
    calls = {"k": 0}

    def flaky(*args, **kwargs):
        calls["k"] += 1
        if calls["k"] % 2 == 0:
            raise SingularDesign("forced")
        return real(*args, **kwargs)

    monkeypatch.setattr(sim, "im_select", flaky)
    (row,) = run([SCENARIOS["1"]], ["IM"], [100], reps=6, B=1000, threads=1)
    assert row.failures == 3 and row.reps == 3


def test_fwer_definition():
    r = SimResult("1", 100, "IM", true=80, parsimonious=10, inclusive=5, other=5)
    assert r.reps == 100 and r.true_or_parsimonious == 90
    assert r.fwer == pytest.approx(0.10)
    assert np.isnan(SimResult("1", 100, "IM").fwer)


def fake_results():
    out = []
    for m in ("IM", "LassoCV"):
        for n in (50, 200, 1000):
            out.append(SimResult("1", n, m, true=n % 7 + 3, parsimonious=2, inclusive=4, other=1))
    return out


def test_report_outputs(tmp_path):
    results = fake_results()
    written = report(results, tmp_path, alpha=0.05, metadata={"seed": 1})
    assert {p.name for p in written} == {"results.csv", "scenario_1.svg", "metadata.json"}
    with open(tmp_path / "results.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == len(results)
    assert tuple(rows[0]) == sim.RESULT_COLUMNS
    root = ET.parse(tmp_path / "scenario_1.svg").getroot()
    panels = [g for g in root.iter(f"{SVG}g") if g.get("class") == "panel"]
    assert len(panels) == 4
    for g in panels:
        lines = g.findall(f"{SVG}polyline")
        assert [pl.get("data-method") for pl in lines] == ["IM", "LassoCV"]
        assert all(len(pl.get("points").split()) == 3 for pl in lines)
    refs = [g for g in panels if g.find(f"{SVG}line[@class='reference']") is not None]
    assert len(refs) == 1
    assert json.loads((tmp_path / "metadata.json").read_text()) == {"seed": 1}


def test_report_requires_results(tmp_path):
    with pytest.raises(ValueError):
        report([], tmp_path)


def test_load_scenario(tmp_path):
    path = tmp_path / "s.json"
    path.write_text(json.dumps({"label": "mine", "p": 3, "beta": [1, 0, 2], "rho": 0.3}))
    s = load_scenario(path)
    assert s == Scenario("mine", (1.0, 0.0, 2.0), 0.3, 1.0)
    path.write_text(json.dumps({"label": "bad", "p": 4, "beta": [1, 0, 2], "rho": 0.3}))
    with pytest.raises(ValueError):
        load_scenario(path)
