"""Simulation study: AR(1) Gaussian designs, selection outcomes, figure panels.

Each replicate draws a fresh design ``X`` (rows ``N_p(0, Omega)`` with
``Omega_jk = rho^|j-k|``) and response ``y = X beta + sigma * eps``, then every
method selects a model from the centered data.  Outcomes are classified
against the true support as true / parsimonious (strict subset) / inclusive
(strict superset) / other.

Replicate ``r`` of scenario ``label`` at sample size ``n`` is seeded with
``SeedSequence(master_seed, spawn_key=(crc32(label), n, r))``, so tables do
not depend on thread count or on which other configurations are run.
"""

from __future__ import annotations

import csv
import json
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import im
from .baselines import Method, run_baseline
from .errors import IMError
from .maxnorm import build, default_threads
from .regression import Dataset, center, fit

DEFAULT_NS = (50, 100, 200, 500, 1000, 2000, 5000)
DEFAULT_REPS = 1000
DEFAULT_SIM_B = 20_000
IM_METHOD = "IM"
ALL_METHODS = (IM_METHOD, "AIC", "BIC", "LassoCV", "AdaptiveLassoCV")
RESULT_COLUMNS = ("scenario", "n", "method", "reps", "true", "parsimonious",
                  "true_or_parsimonious", "inclusive", "other", "fwer")

__all__ = [
    "Scenario",
    "SCENARIOS",
    "Outcome",
    "SimResult",
    "ar1_cov",
    "generate",
    "classify",
    "run",
    "report",
    "load_scenario",
]


@dataclass(frozen=True)
class Scenario:
    label: str
    beta: tuple[float, ...]
    rho: float
    sigma: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "beta", tuple(float(b) for b in self.beta))
        if not 0.0 <= self.rho < 1.0:
            raise ValueError(f"rho must lie in [0, 1), got {self.rho}")
        if self.sigma <= 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")

    @property
    def p(self) -> int:
        return len(self.beta)

    @property
    def support(self) -> frozenset[int]:
        return frozenset(j for j, b in enumerate(self.beta) if b != 0.0)

    def with_sigma(self, sigma: float) -> "Scenario":
        return Scenario(self.label, self.beta, self.rho, sigma)


_STRONG = (3.0, 1.5, 0.0, 0.0, 2.0, 0.0, 0.0)
_WEAK = (0.85, 0.85, 0.85, 0.0, 0.0, 0.0, 0.0)
_WIDE = (0.85,) * 10 + (0.0,) * 10

SCENARIOS = {
    "1": Scenario("1", _STRONG, 0.5),
    "2": Scenario("2", _STRONG, 0.8),
    "3": Scenario("3", _WEAK, 0.5),
    "4": Scenario("4", _WEAK, 0.8),
    "5": Scenario("5", _WIDE, 0.5),
    "6": Scenario("6", _WIDE, 0.8),
}


def load_scenario(path: str | Path) -> Scenario:
    """Read ``{label, p, beta, rho, sigma}`` from a JSON file."""
    doc = json.loads(Path(path).read_text())
    beta = doc["beta"]
    if "p" in doc and int(doc["p"]) != len(beta):
        raise ValueError(f"{path}: p={doc['p']} but beta has {len(beta)} entries")
    return Scenario(str(doc["label"]), tuple(beta), float(doc["rho"]), float(doc.get("sigma", 1.0)))


class Outcome(str, Enum):
    TRUE = "true"
    PARSIMONIOUS = "parsimonious"
    INCLUSIVE = "inclusive"
    OTHER = "other"


def classify(selected: Iterable[int], truth: Iterable[int]) -> Outcome:
    s, t = frozenset(selected), frozenset(truth)
    if s == t:
        return Outcome.TRUE
    if s < t:
        return Outcome.PARSIMONIOUS
    if s > t:
        return Outcome.INCLUSIVE
    return Outcome.OTHER


@dataclass
class SimResult:
    scenario: str
    n: int
    method: str
    true: int = 0
    parsimonious: int = 0
    inclusive: int = 0
    other: int = 0
    failures: int = 0

    @property
    def reps(self) -> int:
        return self.true + self.parsimonious + self.inclusive + self.other

    @property
    def true_or_parsimonious(self) -> int:
        return self.true + self.parsimonious

    @property
    def fwer(self) -> float:
        return 1.0 - self.true_or_parsimonious / self.reps if self.reps else float("nan")

    def add(self, outcome: Outcome) -> None:
        setattr(self, outcome.value, getattr(self, outcome.value) + 1)

    def row(self) -> dict:
        return {
            "scenario": self.scenario, "n": self.n, "method": self.method,
            "reps": self.reps, "true": self.true, "parsimonious": self.parsimonious,
            "true_or_parsimonious": self.true_or_parsimonious,
            "inclusive": self.inclusive, "other": self.other,
            "fwer": f"{self.fwer:.4f}",
        }


def ar1_cov(p: int, rho: float) -> np.ndarray:
    idx = np.arange(p)
    return rho ** np.abs(idx[:, None] - idx[None, :])


def generate(scenario: Scenario, n: int, seed) -> Dataset:
    """One uncentered dataset; ``seed`` is an int or ``SeedSequence``."""
    if n <= scenario.p + 1:
        raise ValueError(f"need n > p + 1, got n={n}, p={scenario.p}")
    rng = np.random.default_rng(seed)
    chol = np.linalg.cholesky(ar1_cov(scenario.p, scenario.rho))
    X = rng.standard_normal((n, scenario.p)) @ chol.T
    y = X @ np.asarray(scenario.beta) + scenario.sigma * rng.standard_normal(n)
    return Dataset(y, X)


def replicate_seed(master_seed: int, label: str, n: int, rep: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(master_seed & 0xFFFF_FFFF_FFFF_FFFF,
                                  spawn_key=(zlib.crc32(label.encode()), n, rep))


def im_select(dataset: Dataset, alpha: float, B: int, seed: int, threads: int = 1) -> im.SelectionResult:
    """IM selection on a centered dataset with a freshly built distribution."""
    theta = fit(dataset)
    dist = build(theta.L, theta.nu, B, seed, threads=threads)
    return im.select(im.plausibility_table(theta, dist), alpha)


def _one_replicate(scenario, n, rep, methods, alpha, B, master_seed):
    data_ss, dist_ss, cv_ss = replicate_seed(master_seed, scenario.label, n, rep).spawn(3)
    data = center(generate(scenario, n, data_ss))
    dist_seed = int(dist_ss.generate_state(1, np.uint64)[0])
    cv_seed = int(cv_ss.generate_state(1, np.uint64)[0])
    out = {}
    for method in methods:
        try:
            if method == IM_METHOD:
                selected = im_select(data, alpha, B, dist_seed).selected
            else:
                selected = run_baseline(data, method, seed=cv_seed).selected
        except (IMError, np.linalg.LinAlgError):
            out[method] = None
            continue
        out[method] = classify(selected, scenario.support)
    return out


def run(
    scenarios: Sequence[Scenario],
    methods: Sequence[str],
    ns: Sequence[int],
    reps: int,
    alpha: float = 0.05,
    B: int = DEFAULT_SIM_B,
    master_seed: int = 0,
    threads: int | None = None,
) -> list[SimResult]:
    """Run every method on every (scenario, n, replicate); one row per method."""
    if not methods:
        raise ValueError("no methods requested")
    if reps < 1 or B < 1 or not ns:
        raise ValueError("reps, B and ns must be positive / nonempty")
    methods = [m if m == IM_METHOD else Method(m).value for m in methods]
    threads = threads or default_threads()
    results = []
    for scenario in scenarios:
        for n in ns:
            rows = {m: SimResult(scenario.label, int(n), m) for m in methods}
            args = [(scenario, int(n), r, methods, alpha, B, master_seed) for r in range(reps)]
            if threads > 1:
                with ThreadPoolExecutor(max_workers=threads) as pool:
                    outcomes = list(pool.map(lambda a: _one_replicate(*a), args))
            else:
                outcomes = [_one_replicate(*a) for a in args]
            for outcome in outcomes:
                for m, o in outcome.items():
                    if o is None:
                        rows[m].failures += 1
                    else:
                        rows[m].add(o)
            results.extend(rows[m] for m in methods)
    return results


def write_results_csv(results: Sequence[SimResult], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=RESULT_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for r in results:
            writer.writerow(r.row())


_PANELS = (
    ("true", "True"),
    ("parsimonious", "Parsimonious"),
    ("true_or_parsimonious", "True or parsimonious"),
    ("inclusive", "Inclusive"),
)
_COLORS = ("#000000", "#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#8c564b", "#ff7f0e")


def scenario_svg(results: Sequence[SimResult], alpha: float) -> str:
    """Four-panel SVG: percentage of each outcome against n, one line per method."""
    methods = list(dict.fromkeys(r.method for r in results))
    ns = sorted({r.n for r in results})
    lookup = {(r.method, r.n): r for r in results}
    W, H, pad = 300, 220, 40
    xs = np.log(ns) if len(ns) > 1 else np.zeros(1)
    span = float(xs[-1] - xs[0]) or 1.0

    def px(n):
        return pad + (W - 2 * pad) * ((np.log(n) if len(ns) > 1 else 0.0) - xs[0]) / span

    def py(pct):
        return H - pad - (H - 2 * pad) * pct / 100.0

    label = results[0].scenario
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{2 * W}" height="{2 * H + 30}" '
             f'font-family="sans-serif" font-size="10">',
             f'<text x="{W}" y="14" text-anchor="middle" font-size="12">Scenario {label}</text>']
    for k, (key, title) in enumerate(_PANELS):
        ox, oy = (k % 2) * W, 20 + (k // 2) * H
        parts.append(f'<g class="panel" transform="translate({ox},{oy})">')
        parts.append(f'<text x="{W / 2}" y="16" text-anchor="middle">{title}</text>')
        parts.append(f'<rect x="{pad}" y="{pad}" width="{W - 2 * pad}" height="{H - 2 * pad}" '
                     'fill="none" stroke="#888"/>')
        for tick in (0, 50, 100):
            parts.append(f'<text x="{pad - 4}" y="{py(tick) + 3:.1f}" text-anchor="end">{tick}</text>')
        for n in ns:
            parts.append(f'<text x="{px(n):.1f}" y="{H - pad + 12}" text-anchor="middle">{n}</text>')
        if key == "true_or_parsimonious":
            ref = py(100 * (1 - alpha))
            parts.append(f'<line class="reference" x1="{pad}" y1="{ref:.1f}" x2="{W - pad}" '
                         f'y2="{ref:.1f}" stroke="#888" stroke-dasharray="4,3"/>')
        for i, m in enumerate(methods):
            pts = []
            for n in ns:
                r = lookup.get((m, n))
                if r is None or r.reps == 0:
                    continue
                pct = 100.0 * getattr(r, key) / r.reps
                pts.append(f"{px(n):.1f},{py(pct):.1f}")
            parts.append(f'<polyline data-method="{m}" fill="none" stroke="{_COLORS[i % len(_COLORS)]}" '
                         f'stroke-width="1.5" points="{" ".join(pts)}"/>')
        parts.append("</g>")
    for i, m in enumerate(methods):
        parts.append(f'<text x="{pad + 90 * i}" y="{2 * H + 24}" '
                     f'fill="{_COLORS[i % len(_COLORS)]}">{m}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def report(results: Sequence[SimResult], out_dir: str | Path, alpha: float = 0.05,
           metadata: dict | None = None) -> list[Path]:
    """Write ``results.csv``, one ``scenario_<label>.svg`` each and ``metadata.json``."""
    if not results:
        raise ValueError("no results to report")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = [out / "results.csv"]
    write_results_csv(results, written[0])
    for label in dict.fromkeys(r.scenario for r in results):
        path = out / f"scenario_{label}.svg"
        path.write_text(scenario_svg([r for r in results if r.scenario == label], alpha))
        written.append(path)
    if metadata is not None:
        path = out / "metadata.json"
        path.write_text(json.dumps(metadata, indent=2, sort_keys=True) + "\n")
        written.append(path)
    return written


def scenario_metadata(scenarios: Sequence[Scenario], **extra) -> dict:
    return {"scenarios": [asdict(s) for s in scenarios], **extra}
