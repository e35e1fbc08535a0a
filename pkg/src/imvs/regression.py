"""Data ingestion, centering and the least-squares fit behind the IM.

The fit produces the standardized quantities the plausibility calculations
work with: ``theta_hat = D^{-1/2} beta_hat``, the t-statistics
``T = theta_hat / sigma_hat`` and the unit-diagonal scale matrix
``L = D^{-1/2} M D^{-1/2}`` with ``M = (X'X)^{-1}`` and ``D = diag(M)``.

Residual scale
--------------
``sigma_hat**2 = RSS / (n - p)`` by default.  This is the divisor that
reproduces the published prostate-cancer t-statistics to three decimals.
The auxiliary variable keeps ``nu = n - p - 1`` degrees of freedom, the
exact residual degrees of freedom once centering has absorbed the
intercept.  Because ``sqrt(RSS / (n - p))`` is slightly smaller than the
pivot's scale, the pairing is (very mildly) conservative.  Pass
``sigma_divisor="n-p-1"`` for the textbook estimator.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.linalg import solve_triangular

from .errors import DataError, DegenerateResidual, SingularDesign, TooFewRows

RANK_TOL = 1e-10

__all__ = [
    "Dataset",
    "ThetaFit",
    "center",
    "fit",
    "read_csv",
    "load_prostate",
]


@dataclass(frozen=True)
class Dataset:
    """Response ``y`` (n,), predictors ``X`` (n, p) and column ``names``."""

    y: np.ndarray
    X: np.ndarray
    names: tuple[str, ...] = field(default=())

    def __post_init__(self):
        y = np.asarray(self.y, dtype=float)
        X = np.asarray(self.X, dtype=float)
        if X.ndim == 1:
            X = X[:, None]
        if y.ndim != 1 or X.ndim != 2 or X.shape[0] != y.shape[0]:
            raise DataError(f"shape mismatch: y {y.shape}, X {X.shape}")
        names = tuple(self.names) or tuple(f"x{j + 1}" for j in range(X.shape[1]))
        if len(names) != X.shape[1]:
            raise DataError(f"{len(names)} names for {X.shape[1]} columns")
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "names", names)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]

    def take(self, columns: Sequence[int]) -> "Dataset":
        """Sub-dataset restricted to the given predictor columns."""
        cols = list(columns)
        return Dataset(self.y, self.X[:, cols], tuple(self.names[j] for j in cols))


@dataclass(frozen=True)
class ThetaFit:
    """Least-squares summaries of a centered dataset.

    Attributes
    ----------
    beta_hat : ndarray (p,)
        OLS coefficients.
    sigma_hat : float
        Residual scale, ``sqrt(rss / sigma_df)``.
    M : ndarray (p, p)
        ``(X'X)^{-1}``.
    D : ndarray (p,)
        Diagonal of ``M``.
    L : ndarray (p, p)
        ``D^{-1/2} M D^{-1/2}``; unit diagonal.
    theta_hat : ndarray (p,)
        ``D^{-1/2} beta_hat``.
    T : ndarray (p,)
        ``theta_hat / sigma_hat``.
    nu : int
        Degrees of freedom of the auxiliary multivariate t, ``n - p - 1``.
    """

    beta_hat: np.ndarray
    sigma_hat: float
    M: np.ndarray
    D: np.ndarray
    L: np.ndarray
    theta_hat: np.ndarray
    T: np.ndarray
    nu: int
    rss: float
    sigma_df: int
    names: tuple[str, ...]

    @property
    def p(self) -> int:
        return self.beta_hat.shape[0]

    @property
    def abs_t(self) -> np.ndarray:
        return np.abs(self.T)


def center(dataset: Dataset) -> Dataset:
    """Subtract column means (two-pass) from ``y`` and every column of ``X``."""
    y = dataset.y - dataset.y.mean()
    y = y - y.mean()
    X = dataset.X - dataset.X.mean(axis=0)
    X = X - X.mean(axis=0)
    return Dataset(y, X, dataset.names)


def _qr_factor(X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    Q, R = np.linalg.qr(X, mode="reduced")
    diag = np.abs(np.diag(R))
    if diag.size and (diag.max() == 0.0 or diag.min() < RANK_TOL * diag.max()):
        raise SingularDesign(
            f"design is numerically rank deficient (min |R_jj| / max |R_jj| = "
            f"{diag.min() / max(diag.max(), np.finfo(float).tiny):.3e})"
        )
    return Q, R


def fit(dataset: Dataset, sigma_divisor: str = "n-p") -> ThetaFit:
    """Fit OLS by Householder QR and standardize.

    ``dataset`` must already be centered; no intercept is estimated.
    """
    n, p = dataset.n, dataset.p
    if n <= p + 1:
        raise TooFewRows(f"need n > p + 1, got n={n}, p={p}")
    if sigma_divisor == "n-p":
        sigma_df = n - p
    elif sigma_divisor == "n-p-1":
        sigma_df = n - p - 1
    else:
        raise ValueError(f"unknown sigma_divisor {sigma_divisor!r}")

    X, y = dataset.X, dataset.y
    Q, R = _qr_factor(X)
    beta_hat = solve_triangular(R, Q.T @ y)
    resid = y - X @ beta_hat
    rss = float(resid @ resid)
    if np.sqrt(rss) <= 1e-12 * max(np.linalg.norm(y), np.finfo(float).tiny):
        raise DegenerateResidual("residuals vanish (exact fit); sigma_hat = 0")

    R_inv = solve_triangular(R, np.eye(p))
    M = R_inv @ R_inv.T
    M = 0.5 * (M + M.T)
    D = np.diag(M).copy()
    root_D = np.sqrt(D)
    L = M / np.outer(root_D, root_D)
    L = 0.5 * (L + L.T)
    np.fill_diagonal(L, 1.0)

    sigma_hat = float(np.sqrt(rss / sigma_df))
    theta_hat = beta_hat / root_D
    return ThetaFit(
        beta_hat=beta_hat,
        sigma_hat=sigma_hat,
        M=M,
        D=D,
        L=L,
        theta_hat=theta_hat,
        T=theta_hat / sigma_hat,
        nu=n - p - 1,
        rss=rss,
        sigma_df=sigma_df,
        names=dataset.names,
    )


def read_csv(path: str | Path, response: str, predictors: Sequence[str] | None = None) -> Dataset:
    """Read a headered numeric CSV; ``response`` names the y column.

    All remaining columns are predictors unless ``predictors`` is given.
    Missing or non-numeric cells raise :class:`DataError` naming the row
    (1-based, header is row 1) and column.
    """
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise DataError(f"{path}: empty file") from None
        rows = list(reader)

    if response not in header:
        raise DataError(f"{path}: response column {response!r} not in header {header}")
    if predictors is None:
        predictors = [h for h in header if h != response]
    missing = [c for c in predictors if c not in header]
    if missing:
        raise DataError(f"{path}: unknown predictor columns {missing}")

    values = np.empty((len(rows), len(header)))
    for i, row in enumerate(rows, start=2):
        if len(row) != len(header):
            raise DataError(f"{path}: row {i} has {len(row)} cells, expected {len(header)}")
        for j, cell in enumerate(row):
            try:
                values[i - 2, j] = float(cell)
            except ValueError:
                raise DataError(
                    f"{path}: row {i}, column {header[j]!r}: non-numeric or missing cell {cell!r}"
                ) from None
            if not np.isfinite(values[i - 2, j]):
                raise DataError(f"{path}: row {i}, column {header[j]!r}: non-finite value")

    cols = [header.index(c) for c in predictors]
    return Dataset(values[:, header.index(response)], values[:, cols], tuple(predictors))


def load_prostate() -> Dataset:
    """The 97-patient prostate cancer data, response ``lpsa`` (uncentered)."""
    ref = resources.files("imvs") / "data" / "prostate.csv"
    with resources.as_file(ref) as path:
        return read_csv(path, "lpsa")
