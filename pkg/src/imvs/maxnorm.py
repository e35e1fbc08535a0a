"""Distribution of the sup-norm of a multivariate Student-t vector.

``F(c) = P(||U||_inf <= c)`` for ``U ~ t_p(0, L; nu)`` has no closed form for
general ``L``, so it is represented by a sorted Monte Carlo sample.  Each draw
is ``||Z / sqrt(S / nu)||_inf`` with ``Z = chol(L) @ N(0, I_p)`` and
``S ~ ChiSq(nu)`` independent.

Random numbers come from numpy's counter-based ``Philox`` bit generator.  The
``B`` draws are split into fixed chunks of ``CHUNK_SIZE``; chunk ``k`` is
seeded with ``SeedSequence(seed, spawn_key=(k,))``.  The sample is therefore
a function of ``(L, nu, B, seed)`` only, whatever the number of worker
threads.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import CholeskyFailure

CHUNK_SIZE = 1 << 15
DEFAULT_B = 100_000
THREADS_ENV = "IMVS_THREADS"

__all__ = [
    "MaxNormDist",
    "build",
    "default_threads",
    "regularized_incomplete_beta",
    "univariate_t_cdf",
]


def default_threads() -> int:
    env = os.environ.get(THREADS_ENV)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _chunk_rng(seed: int, chunk: int) -> np.random.Generator:
    ss = np.random.SeedSequence(seed & 0xFFFF_FFFF_FFFF_FFFF, spawn_key=(chunk,))
    return np.random.Generator(np.random.Philox(ss))


def _draw_chunk(chol_L: np.ndarray, nu: int, size: int, seed: int, chunk: int) -> np.ndarray:
    rng = _chunk_rng(seed, chunk)
    Z = rng.standard_normal((size, chol_L.shape[0])) @ chol_L.T
    S = rng.chisquare(nu, size)
    return np.abs(Z).max(axis=1) / np.sqrt(S / nu)


@dataclass(frozen=True, eq=False)
class MaxNormDist:
    """Empirical law of ``||U||_inf``; build with :func:`build`."""

    nu: int
    chol_L: np.ndarray
    samples: np.ndarray
    seed: int
    B: int

    @property
    def p(self) -> int:
        return self.chol_L.shape[0]

    def cdf(self, c):
        """Fraction of samples ``<= c``; accepts scalars or arrays."""
        c_arr = np.asarray(c, dtype=float)
        if np.isnan(c_arr).any():
            raise ValueError("cdf evaluated at NaN")
        out = np.searchsorted(self.samples, c_arr, side="right") / self.B
        return float(out) if out.ndim == 0 else out

    def sf(self, c):
        """``1 - cdf(c)``."""
        out = 1.0 - np.asarray(self.cdf(c))
        return float(out) if out.ndim == 0 else out

    def quantile(self, q: float) -> float:
        """The ``ceil(q B)``-th order statistic (no interpolation).

        ``q B`` within float round-off of an integer is snapped to it, so that
        ``quantile(cdf(c)) <= c`` holds for every sample point ``c``.
        """
        q = float(q)
        if not 0.0 < q < 1.0:
            raise ValueError(f"quantile level must lie in (0, 1), got {q}")
        exact = Fraction(q) * self.B
        nearest = round(exact)
        if abs(exact - nearest) <= Fraction(1, 10**9) * max(1, nearest):
            k = int(nearest)
        else:
            k = math.ceil(exact)
        k = min(max(k, 1), self.B)
        return float(self.samples[k - 1])


def build(
    L: np.ndarray,
    nu: int,
    B: int = DEFAULT_B,
    seed: int = 0,
    threads: int | None = None,
) -> MaxNormDist:
    """Simulate ``B`` draws of ``||U||_inf`` for ``U ~ t_p(0, L; nu)``."""
    L = np.atleast_2d(np.asarray(L, dtype=float))
    if L.shape[0] != L.shape[1]:
        raise ValueError(f"L must be square, got shape {L.shape}")
    if int(nu) < 1 or int(B) < 1:
        raise ValueError(f"need nu >= 1 and B >= 1, got nu={nu}, B={B}")
    nu, B = int(nu), int(B)
    try:
        chol_L = np.linalg.cholesky(0.5 * (L + L.T))
    except np.linalg.LinAlgError as exc:
        raise CholeskyFailure(f"L is not numerically positive definite: {exc}") from None

    starts = range(0, B, CHUNK_SIZE)
    jobs = [(chol_L, nu, min(CHUNK_SIZE, B - s), seed, k) for k, s in enumerate(starts)]
    threads = threads or default_threads()
    if threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda a: _draw_chunk(*a), jobs))
    else:
        parts = [_draw_chunk(*a) for a in jobs]
    samples = np.sort(np.concatenate(parts))
    samples.setflags(write=False)
    return MaxNormDist(nu=nu, chol_L=chol_L, samples=samples, seed=seed, B=B)


def _beta_cf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta (modified Lentz)."""
    tiny = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    d = 1.0 / (d if abs(d) > tiny else tiny)
    h = d
    for m in range(1, 10_000):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        d = 1.0 / (d if abs(d) > tiny else tiny)
        c = 1.0 + aa / c
        c = c if abs(c) > tiny else tiny
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        d = 1.0 / (d if abs(d) > tiny else tiny)
        c = 1.0 + aa / c
        c = c if abs(c) > tiny else tiny
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            return h
    raise RuntimeError(f"incomplete beta continued fraction did not converge (a={a}, b={b}, x={x})")


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """``I_x(a, b)`` for ``a, b > 0`` and ``0 <= x <= 1``."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must lie in [0, 1], got {x}")
    if x == 0.0 or x == 1.0:
        return x
    log_front = (
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
        + a * math.log(x) + b * math.log1p(-x)
    )
    front = math.exp(log_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_cf(a, b, x) / a
    return 1.0 - front * _beta_cf(b, a, 1.0 - x) / b


def univariate_t_cdf(x: float, nu: float) -> float:
    """Student-t CDF via ``P(|t| > |x|) = I_{nu/(nu+x^2)}(nu/2, 1/2)``."""
    if nu <= 0:
        raise ValueError(f"nu must be positive, got {nu}")
    if math.isnan(x):
        raise ValueError("x is NaN")
    if math.isinf(x):
        return 1.0 if x > 0 else 0.0
    if x == 0.0:
        return 0.5
    # 1 - nu/(nu+x^2) loses digits for small x; use the complementary form
    z = nu / (nu + x * x)
    if z > 0.5:
        two_tail = 1.0 - regularized_incomplete_beta(0.5, nu / 2.0, x * x / (nu + x * x))
    else:
        two_tail = regularized_incomplete_beta(nu / 2.0, 0.5, z)
    return 1.0 - 0.5 * two_tail if x > 0 else 0.5 * two_tail
