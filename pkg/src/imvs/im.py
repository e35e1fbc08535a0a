"""Beliefs, plausibilities, selection and simultaneous regions.

Everything here is computed from the hyper-cube predictive random set
``{u : ||u||_inf <= ||U||_inf}``: each quantity reduces to the CDF ``F`` of
``||U||_inf`` evaluated at some sup-norm of the t-statistics.  All functions
take a fitted :class:`~imvs.regression.ThetaFit` together with one shared
:class:`~imvs.maxnorm.MaxNormDist` and never resample.

Variable indices are 0-based column positions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch
from .maxnorm import MaxNormDist
from .regression import ThetaFit

__all__ = [
    "PlausibilityTable",
    "SelectionResult",
    "PosiRegion",
    "assertion_belief",
    "model_plausibility",
    "plausibility_table",
    "select",
    "singleton_plausibility",
    "posi_region",
]


def _check(fit: ThetaFit, dist: MaxNormDist) -> None:
    if fit.p != dist.p:
        raise DimensionMismatch(f"fit has p={fit.p} but distribution has p={dist.p}")


def _index_set(I: Iterable[int], p: int) -> set[int]:
    out = {int(i) for i in I}
    bad = sorted(i for i in out if not 0 <= i < p)
    if bad:
        raise IndexError(f"variable indices {bad} out of range for p={p}")
    return out


@dataclass(frozen=True)
class PlausibilityTable:
    """Variables ordered by ``|T|`` ascending with the nested-model plausibilities.

    ``eta[j]`` is the plausibility of the model keeping ``pi[j+1:]``, i.e.
    ``1 - F(abs_t_sorted[j])``.
    """

    pi: np.ndarray
    abs_t_sorted: np.ndarray
    eta: np.ndarray
    names_ordered: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.pi)


@dataclass(frozen=True)
class SelectionResult:
    alpha: float
    j_star: int
    selected: tuple[int, ...]
    eta_at_boundary: float
    names: tuple[str, ...] = ()

    @property
    def selected_names(self) -> tuple[str, ...]:
        return tuple(self.names[i] for i in self.selected) if self.names else ()


@dataclass(frozen=True)
class PosiRegion:
    """Hyper-cube plausibility region ``{theta : pl(theta) > alpha}``.

    On the coefficient scale the region is the box
    ``beta_hat_i +/- sigma_hat * sqrt(D_i) * k_alpha``; projecting onto any
    sub-model (even a data-selected one) keeps the same half-widths.
    """

    alpha: float
    k_alpha: float
    theta_center: np.ndarray
    theta_halfwidth: float
    beta_center: np.ndarray
    beta_intervals: np.ndarray
    names: tuple[str, ...] = ()

    def contains(self, theta: Sequence[float]) -> bool:
        theta = np.asarray(theta, dtype=float)
        return bool(np.max(np.abs(self.theta_center - theta)) <= self.theta_halfwidth)

    def contains_beta(self, beta: Sequence[float]) -> bool:
        beta = np.asarray(beta, dtype=float)
        lo, hi = self.beta_intervals[:, 0], self.beta_intervals[:, 1]
        return bool(np.all((lo <= beta) & (beta <= hi)))

    def project(self, I: Iterable[int]) -> np.ndarray:
        """Intervals for the coefficients in ``I`` (rows in the order given)."""
        idx = list(I)
        _index_set(idx, len(self.theta_center))
        return self.beta_intervals[idx]


def assertion_belief(fit: ThetaFit, dist: MaxNormDist, j: int) -> float:
    """Belief that variable ``j`` is relevant: ``F(|T_j|)``."""
    _check(fit, dist)
    (j,) = _index_set([j], fit.p)
    return float(dist.cdf(abs(fit.T[j])))


def model_plausibility(fit: ThetaFit, dist: MaxNormDist, I: Iterable[int]) -> float:
    """Plausibility that model ``I`` contains every relevant variable.

    ``1 - F(max_{i not in I} |T_i|)``; the full model gets exactly 1.
    """
    _check(fit, dist)
    keep = _index_set(I, fit.p)
    out = [i for i in range(fit.p) if i not in keep]
    if not out:
        return 1.0
    return float(dist.sf(np.max(np.abs(fit.T[out]))))


def plausibility_table(fit: ThetaFit, dist: MaxNormDist) -> PlausibilityTable:
    _check(fit, dist)
    abs_t = np.abs(fit.T)
    pi = np.argsort(abs_t, kind="stable")
    abs_sorted = abs_t[pi]
    eta = np.atleast_1d(dist.sf(abs_sorted))
    return PlausibilityTable(
        pi=pi,
        abs_t_sorted=abs_sorted,
        eta=eta,
        names_ordered=tuple(fit.names[i] for i in pi),
    )


def select(table: PlausibilityTable, alpha: float) -> SelectionResult:
    """Smallest model with plausibility above ``alpha``.

    ``j_star`` is the largest 1-based rank with ``eta > alpha`` (0 if none);
    the variables ranked above it are kept.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    above = np.flatnonzero(table.eta > alpha)
    j_star = int(above[-1]) + 1 if above.size else 0
    selected = tuple(sorted(int(i) for i in table.pi[j_star:]))
    boundary = float(table.eta[j_star - 1]) if j_star >= 1 else 1.0
    names = ()
    if table.names_ordered:
        names = tuple(np.asarray(table.names_ordered, dtype=object)[np.argsort(table.pi)])
    return SelectionResult(alpha=float(alpha), j_star=j_star, selected=selected,
                           eta_at_boundary=boundary, names=names)


def singleton_plausibility(fit: ThetaFit, dist: MaxNormDist, theta: Sequence[float]) -> float:
    """``1 - F(||(theta_hat - theta) / sigma_hat||_inf)``."""
    _check(fit, dist)
    theta = np.asarray(theta, dtype=float)
    if theta.shape != fit.theta_hat.shape:
        raise DimensionMismatch(f"theta has shape {theta.shape}, expected {fit.theta_hat.shape}")
    r = np.max(np.abs(fit.theta_hat - theta)) / fit.sigma_hat
    if r == 0.0:
        return 1.0
    return float(dist.sf(r))


def posi_region(fit: ThetaFit, dist: MaxNormDist, alpha: float) -> PosiRegion:
    _check(fit, dist)
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    k = dist.quantile(1.0 - alpha)
    half = fit.sigma_hat * np.sqrt(fit.D) * k
    intervals = np.column_stack([fit.beta_hat - half, fit.beta_hat + half])
    return PosiRegion(
        alpha=float(alpha),
        k_alpha=k,
        theta_center=fit.theta_hat.copy(),
        theta_halfwidth=fit.sigma_hat * k,
        beta_center=fit.beta_hat.copy(),
        beta_intervals=intervals,
        names=fit.names,
    )
