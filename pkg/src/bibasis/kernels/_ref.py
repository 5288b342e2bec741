"""Pure-numpy reference kernels.

Semantics contract shared with the compiled backend (_fast.pyx): given a
system matrix X (m rows = vectors, d columns = coordinates), weights w and
exponent p (math.inf for the sup norm), each coefficient vector alpha yields
four norms of the partial-sum process s_n = sum_{k<=n} alpha_k x_k:

    last    = ||s_m||
    env     = || max_n |s_n| ||        (coordinatewise running maximum)
    maxpart = max_n ||s_n||
    abssum  = || sum_k |alpha_k x_k| ||

The compiled backend must agree with this one to float64 rounding.
"""

from __future__ import annotations

import math

import numpy as np

# memory cap for the batched cumulative sums, in float64 elements
_CHUNK_ELEMS = 4_000_000


def _norms(v: np.ndarray, w: np.ndarray, p: float) -> np.ndarray:
    """Weighted p-norm along the last axis, vectorized over leading axes."""
    a = np.abs(v)
    if p == math.inf:
        return a.max(axis=-1)
    if p == 1.0:
        return a @ w
    if p == 2.0:
        return np.sqrt((a * a) @ w)
    return ((a ** p) @ w) ** (1.0 / p)


def eval_terms(
    X: np.ndarray, w: np.ndarray, p: float, alpha: np.ndarray
) -> tuple[float, float, float, float]:
    """(last, env, maxpart, abssum) for a single coefficient vector."""
    s = np.cumsum(alpha[:, None] * X, axis=0)
    partial = _norms(s, w, p)
    env = np.max(np.abs(s), axis=0)
    abss = np.abs(alpha) @ np.abs(X)
    return (
        float(partial[-1]),
        float(_norms(env, w, p)),
        float(partial.max()),
        float(_norms(abss, w, p)),
    )


def eval_terms_batch(X: np.ndarray, w: np.ndarray, p: float, A: np.ndarray) -> np.ndarray:
    """(P, 4) array of (last, env, maxpart, abssum) for P coefficient rows."""
    A = np.asarray(A, dtype=np.float64)
    P, m = A.shape
    d = X.shape[1]
    out = np.empty((P, 4))
    step = max(1, _CHUNK_ELEMS // max(1, m * d))
    absX = np.abs(X)
    for lo in range(0, P, step):
        hi = min(P, lo + step)
        chunk = A[lo:hi]
        s = np.cumsum(chunk[:, :, None] * X[None, :, :], axis=1)
        partial = _norms(s, w, p)                      # (c, m)
        env = np.max(np.abs(s), axis=1)                # (c, d)
        abss = np.abs(chunk) @ absX                    # (c, d)
        out[lo:hi, 0] = partial[:, -1]
        out[lo:hi, 1] = _norms(env, w, p)
        out[lo:hi, 2] = partial.max(axis=1)
        out[lo:hi, 3] = _norms(abss, w, p)
    return out
