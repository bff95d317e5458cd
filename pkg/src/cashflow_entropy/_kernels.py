"""Hot numeric kernels with a numba path and a pure-numpy fallback.

Set ``CASHFLOW_ENTROPY_NO_NUMBA=1`` to force the numpy implementations.
Both variants are always importable as ``*_numpy`` / ``*_numba`` so tests
and the benchmark can compare them directly.
"""
import os

import numpy as np

try:
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    NUMBA_AVAILABLE = False

USE_NUMBA = NUMBA_AVAILABLE and os.environ.get("CASHFLOW_ENTROPY_NO_NUMBA", "") not in ("1", "true", "yes")


# --- numpy reference path -------------------------------------------------

def weight_entropy_numpy(x):
    """Entropy in bits of a 1-D weight vector after normalization; 0 for an all-zero vector."""
    total = x.sum()
    if total <= 0.0:
        return 0.0
    q = x / total
    q = q[q > 0.0]
    return float(-np.sum(q * np.log2(q)))


def row_entropies_numpy(mat):
    totals = mat.sum(axis=1)
    safe = np.where(totals > 0.0, totals, 1.0)
    q = mat / safe[:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(q > 0.0, q * np.log2(np.where(q > 0.0, q, 1.0)), 0.0)
    out = -terms.sum(axis=1)
    out[totals <= 0.0] = 0.0
    return out


def ipf_balance_numpy(a, target, tol, max_iter):
    """Alternate row and column scaling of ``a`` until both margins equal ``target``.

    Returns ``(matrix, iterations, imbalance)`` where imbalance is the max
    relative gap between row and column sums after the last column pass.
    """
    m = a.copy()
    imbalance = np.inf
    for it in range(1, max_iter + 1):
        rows = m.sum(axis=1)
        m *= np.where(rows > 0.0, target / np.where(rows > 0.0, rows, 1.0), 0.0)[:, None]
        cols = m.sum(axis=0)
        m *= np.where(cols > 0.0, target / np.where(cols > 0.0, cols, 1.0), 0.0)[None, :]
        rows = m.sum(axis=1)
        cols = m.sum(axis=0)
        imbalance = float(np.max(np.abs(rows - cols) / np.maximum(np.maximum(rows, cols), 1e-300)))
        if imbalance <= tol:
            return m, it, imbalance
    return m, max_iter, imbalance


# --- numba path -----------------------------------------------------------

if NUMBA_AVAILABLE:

    @njit(cache=True)
    def weight_entropy_numba(x):
        total = 0.0
        for i in range(x.shape[0]):
            total += x[i]
        if total <= 0.0:
            return 0.0
        h = 0.0
        for i in range(x.shape[0]):
            q = x[i] / total
            if q > 0.0:
                h -= q * np.log2(q)
        return h

    @njit(cache=True)
    def row_entropies_numba(mat):
        n, m = mat.shape
        out = np.zeros(n)
        for j in range(n):
            total = 0.0
            for k in range(m):
                total += mat[j, k]
            if total <= 0.0:
                continue
            h = 0.0
            for k in range(m):
                q = mat[j, k] / total
                if q > 0.0:
                    h -= q * np.log2(q)
            out[j] = h
        return out

    @njit(cache=True)
    def ipf_balance_numba(a, target, tol, max_iter):
        m = a.copy()
        n = m.shape[0]
        rows = np.empty(n)
        cols = np.empty(n)
        imbalance = np.inf
        for it in range(1, max_iter + 1):
            for j in range(n):
                s = 0.0
                for k in range(n):
                    s += m[j, k]
                f = target[j] / s if s > 0.0 else 0.0
                for k in range(n):
                    m[j, k] *= f
            cols[:] = 0.0
            for j in range(n):
                for k in range(n):
                    cols[k] += m[j, k]
            for k in range(n):
                f = target[k] / cols[k] if cols[k] > 0.0 else 0.0
                for j in range(n):
                    m[j, k] *= f
            rows[:] = 0.0
            cols[:] = 0.0
            for j in range(n):
                for k in range(n):
                    rows[j] += m[j, k]
                    cols[k] += m[j, k]
            imbalance = 0.0
            for j in range(n):
                hi = max(max(rows[j], cols[j]), 1e-300)
                gap = abs(rows[j] - cols[j]) / hi
                if gap > imbalance:
                    imbalance = gap
            if imbalance <= tol:
                return m, it, imbalance
        return m, max_iter, imbalance

else:  # pragma: no cover
    weight_entropy_numba = weight_entropy_numpy
    row_entropies_numba = row_entropies_numpy
    ipf_balance_numba = ipf_balance_numpy


if USE_NUMBA:
    weight_entropy = weight_entropy_numba
    row_entropies = row_entropies_numba
    ipf_balance = ipf_balance_numba
else:
    weight_entropy = weight_entropy_numpy
    row_entropies = row_entropies_numpy
    ipf_balance = ipf_balance_numpy


def backend():
    return "numba" if USE_NUMBA else "numpy"
