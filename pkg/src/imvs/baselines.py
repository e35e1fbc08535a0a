"""Reference selectors: AIC/BIC best subset, lasso and adaptive lasso with CV."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from ._kernels import all_subset_rss, lasso_cd
from .errors import SingularDesign
from .regression import Dataset, _qr_factor, center, fit as ols_fit

EXHAUSTIVE_MAX_P = 20
CD_TOL = 1e-7
CD_MAX_SWEEPS = 100_000
N_LAMBDA = 100
LAMBDA_RATIO = 1e-3

__all__ = [
    "Method",
    "BaselineChoice",
    "ic_select",
    "lambda_grid",
    "lasso_path",
    "lasso_cv_select",
    "coordinate_descent",
    "fold_ids",
    "run_baseline",
]


class Method(str, Enum):
    AIC = "AIC"
    BIC = "BIC"
    LASSO_CV = "LassoCV"
    ADAPTIVE_LASSO_CV = "AdaptiveLassoCV"


@dataclass(frozen=True)
class BaselineChoice:
    """``score`` is the minimized criterion (AIC/BIC) or the chosen lambda."""

    method: Method
    selected: tuple[int, ...]
    score: float
    info: dict = field(default_factory=dict, compare=False)


def _criterion(rss, n, k, penalty):
    return n * np.log(np.maximum(rss, np.finfo(float).tiny) / n) + penalty * k


def _penalty(criterion: Method | str, n: int) -> float:
    criterion = Method(criterion)
    if criterion is Method.AIC:
        return 2.0
    if criterion is Method.BIC:
        return math.log(n)
    raise ValueError(f"ic_select handles AIC or BIC, not {criterion.value}")


def _exhaustive(X, y, penalty):
    n, p = X.shape
    G = np.empty((p + 1, p + 1))
    G[:p, :p] = X.T @ X
    G[:p, p] = G[p, :p] = X.T @ y
    G[p, p] = y @ y
    rss = all_subset_rss(G, 1e-10)
    if np.any(rss < 0):
        raise SingularDesign("a predictor subset is numerically collinear")
    sizes = np.bitwise_count(np.arange(1 << p, dtype=np.uint64)).astype(float)
    crit = _criterion(rss, n, sizes, penalty)
    best = int(np.argmin(crit))
    return tuple(j for j in range(p) if best >> j & 1), float(crit[best])


def _subset_rss(X, y, cols):
    if not cols:
        return float(y @ y)
    Xs = X[:, cols]
    Q, R = _qr_factor(Xs)
    r = y - Q @ (Q.T @ y)
    return float(r @ r)


def _forward(X, y, penalty):
    n, p = X.shape
    current: list[int] = []
    best = float(_criterion(y @ y, n, 0, penalty))
    while len(current) < p:
        trials = []
        for j in range(p):
            if j in current:
                continue
            cols = current + [j]
            trials.append((float(_criterion(_subset_rss(X, y, cols), n, len(cols), penalty)), j))
        value, j = min(trials)
        if value >= best:
            break
        best = value
        current.append(j)
    return tuple(sorted(current)), best


def ic_select(dataset: Dataset, criterion: Method | str, search: str = "auto") -> BaselineChoice:
    """Minimize ``n log(RSS_I / n) + penalty |I|`` over sub-models.

    ``search="auto"`` is exhaustive for ``p <= 20`` and greedy forward
    stepwise otherwise; ``"exhaustive"`` and ``"forward"`` force one.
    The dataset is expected to be centered.
    """
    X, y = dataset.X, dataset.y
    n, p = X.shape
    penalty = _penalty(criterion, n)
    if search == "auto":
        search = "exhaustive" if p <= EXHAUSTIVE_MAX_P else "forward"
    if search == "exhaustive":
        selected, value = _exhaustive(X, y, penalty)
    elif search == "forward":
        selected, value = _forward(X, y, penalty)
    else:
        raise ValueError(f"unknown search {search!r}")
    return BaselineChoice(Method(criterion), selected, value, {"search": search})


def coordinate_descent(X, y, lam, weights=None, beta0=None, tol=CD_TOL,
                       max_sweeps=CD_MAX_SWEEPS, return_history=False):
    """Minimize ``||y - X b||^2 / (2n) + lam * sum(weights * |b|)``."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n, p = X.shape
    w = np.ones(p) if weights is None else np.asarray(weights, dtype=float)
    beta = np.zeros(p) if beta0 is None else np.array(beta0, dtype=float)
    history = np.empty(max_sweeps if return_history else 0)
    sweeps = lasso_cd(X.T @ X / n, X.T @ y / n, float(y @ y) / n, float(lam), w,
                      beta, tol, max_sweeps, history)
    if return_history:
        return beta, history[:sweeps]
    return beta


def lambda_grid(X, y, weights=None, n_lambda=N_LAMBDA, ratio=LAMBDA_RATIO):
    """Log-spaced grid from the smallest all-zero lambda down to ``ratio`` times it."""
    n = X.shape[0]
    w = np.ones(X.shape[1]) if weights is None else np.asarray(weights)
    lam_max = float(np.max(np.abs(X.T @ y) / (n * w)))
    return np.geomspace(lam_max, lam_max * ratio, n_lambda)


def lasso_path(X, y, lambdas, weights=None, tol=CD_TOL):
    """Warm-started solutions along ``lambdas``; returns ``(len(lambdas), p)``."""
    n, p = X.shape
    w = np.ones(p) if weights is None else np.asarray(weights, dtype=float)
    gram, xty, yty = X.T @ X / n, X.T @ y / n, float(y @ y) / n
    beta = np.zeros(p)
    coefs = np.empty((len(lambdas), p))
    no_history = np.empty(0)
    for k, lam in enumerate(lambdas):
        lasso_cd(gram, xty, yty, float(lam), w, beta, tol, CD_MAX_SWEEPS, no_history)
        coefs[k] = beta
    return coefs


def fold_ids(n: int, folds: int, seed: int) -> np.ndarray:
    """Balanced fold labels, a deterministic function of ``(n, folds, seed)``."""
    rng = np.random.default_rng(seed)
    return rng.permutation(np.arange(n) % folds)


def lasso_cv_select(dataset: Dataset, folds: int = 10, adaptive: bool = False,
                    seed: int = 0) -> BaselineChoice:
    """Lasso (or adaptive lasso, weights ``1/|beta_OLS|``) tuned by K-fold CV.

    The lambda grid is computed once on the full data; each training fold is
    re-centered and held-out predictions include the training intercept.
    lambda minimizes mean held-out squared error.
    """
    X, y = dataset.X, dataset.y
    n, p = X.shape
    weights = np.ones(p)
    if adaptive:
        beta_ols = ols_fit(dataset).beta_hat
        weights = 1.0 / np.maximum(np.abs(beta_ols), np.finfo(float).tiny)
    lambdas = lambda_grid(X, y, weights)

    ids = fold_ids(n, folds, seed)
    sq_err = np.zeros(len(lambdas))
    for k in range(folds):
        test = ids == k
        train = center(Dataset(y[~test], X[~test]))
        x_mean = X[~test].mean(axis=0)
        y_mean = y[~test].mean()
        coefs = lasso_path(train.X, train.y, lambdas, weights)
        pred = y_mean + (X[test] - x_mean) @ coefs.T
        sq_err += ((y[test, None] - pred) ** 2).sum(axis=0)
    cv_err = sq_err / n
    best = int(np.argmin(cv_err))

    beta = lasso_path(X, y, lambdas[: best + 1], weights)[-1]
    selected = tuple(int(j) for j in np.flatnonzero(beta != 0.0))
    method = Method.ADAPTIVE_LASSO_CV if adaptive else Method.LASSO_CV
    return BaselineChoice(method, selected, float(lambdas[best]),
                          {"beta": beta, "cv_error": cv_err, "lambdas": lambdas})


def run_baseline(dataset: Dataset, method: Method | str, seed: int = 0) -> BaselineChoice:
    """Dispatch one baseline on a centered dataset."""
    method = Method(method)
    if method in (Method.AIC, Method.BIC):
        return ic_select(dataset, method)
    return lasso_cv_select(dataset, adaptive=method is Method.ADAPTIVE_LASSO_CV, seed=seed)
