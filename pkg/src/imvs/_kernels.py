"""Compiled inner loops for the baseline selectors."""

import numpy as np
from numba import njit


@njit(cache=True)
def all_subset_rss(G, tol):
    """RSS of every column subset from the augmented Gram matrix.

    ``G`` is ``[[X'X, X'y], [y'X, y'y]]`` of size ``p + 1``.  Subsets are
    visited depth-first in lexicographic order of their sorted members; each
    child sweeps one more pivot into a copy of its parent's Schur
    complement, so nothing is ever un-swept.  Entry ``mask`` of the result
    is the RSS of the subset whose bits are set in ``mask``; ``-1`` flags a
    subset whose pivot collapsed below ``tol`` times its original diagonal.
    """
    p = G.shape[0] - 1
    out = np.full(1 << p, -1.0)
    out[0] = G[p, p]
    stack = np.empty((p + 1, p + 1, p + 1))
    stack[0] = G
    masks = np.zeros(p + 1, np.int64)
    nxt = np.zeros(p + 1, np.int64)
    depth = 0
    while depth >= 0:
        j = nxt[depth]
        if j >= p:
            depth -= 1
            continue
        nxt[depth] = j + 1
        A = stack[depth]
        piv = A[j, j]
        if piv <= tol * G[j, j]:
            continue
        C = stack[depth + 1]
        for a in range(j + 1, p + 1):
            f = A[a, j] / piv
            for b in range(j + 1, p + 1):
                C[a, b] = A[a, b] - f * A[j, b]
        mask = masks[depth] | (1 << j)
        rss = C[p, p]
        out[mask] = rss if rss > 0.0 else 0.0
        depth += 1
        masks[depth] = mask
        nxt[depth] = j + 1
    return out


@njit(cache=True)
def lasso_cd(gram, xty, yty, lam, weights, beta, tol, max_sweeps, history):
    """Cyclic coordinate descent for ``0.5/n ||y - X b||^2 + lam * sum w_i |b_i|``.

    Works on ``gram = X'X / n``, ``xty = X'y / n`` and ``yty = y'y / n``;
    ``beta`` is the warm start and is updated in place.  The objective
    after each sweep is written to ``history`` (when it has room).  Returns
    the number of sweeps run; stops once no coefficient moves by ``tol`` or
    more.
    """
    p = gram.shape[0]
    grad = xty - gram @ beta
    sweeps = 0
    while sweeps < max_sweeps:
        max_delta = 0.0
        for j in range(p):
            hjj = gram[j, j]
            if hjj <= 0.0:
                continue
            old = beta[j]
            z = grad[j] + hjj * old
            thr = lam * weights[j]
            if z > thr:
                new = (z - thr) / hjj
            elif z < -thr:
                new = (z + thr) / hjj
            else:
                new = 0.0
            delta = new - old
            if delta != 0.0:
                beta[j] = new
                for k in range(p):
                    grad[k] -= gram[k, j] * delta
                if abs(delta) > max_delta:
                    max_delta = abs(delta)
        if sweeps < history.shape[0]:
            # 0.5 * (yty - 2 b'xty + b'Gb) + penalty; b'Gb = b'(xty - grad)
            quad = 0.0
            pen = 0.0
            for k in range(p):
                quad += beta[k] * (xty[k] + grad[k])
                pen += weights[k] * abs(beta[k])
            history[sweeps] = 0.5 * (yty - quad) + lam * pen
        sweeps += 1
        if max_delta < tol:
            break
    return sweeps
