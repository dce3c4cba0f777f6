"""Pure numpy implementations of the hot kernels.

Mirror of the compiled module `_hot`; same signatures, same results.
Every function takes and returns float64 arrays in the natural-log domain.
"""

from __future__ import annotations

import numpy as np

BACKEND = "pure"


def lower_hull(y: np.ndarray) -> np.ndarray:
    """Lower convex hull of the points (i, y[i]), evaluated back at every i.

    Monotone-chain over abscissae that are already sorted (0, 1, ..., m-1),
    then piecewise-linear interpolation between hull vertices.
    """
    y = np.ascontiguousarray(y, dtype=np.float64)
    m = y.shape[0]
    if m <= 2:
        return y.copy()
    hx: list[int] = []
    for i in range(m):
        # pop while the new point makes the previous vertex non-extremal
        while len(hx) >= 2:
            i0, i1 = hx[-2], hx[-1]
            if (y[i1] - y[i0]) * (i - i0) >= (y[i] - y[i0]) * (i1 - i0):
                hx.pop()
            else:
                break
        hx.append(i)
    hxa = np.asarray(hx)
    return np.interp(np.arange(m), hxa, y[hxa])


def min_chord(log_m: np.ndarray, coef: np.ndarray) -> np.ndarray:
    """out[k] = min_{0<=j<k} (k-j)*coef[k] + log_m[j], out[0] = 0.

    `log_m` is convex in j for weight sequences, so the inner objective is
    convex and the scan can stop at the first increase.
    """
    log_m = np.asarray(log_m, dtype=np.float64)
    coef = np.asarray(coef, dtype=np.float64)
    n = log_m.shape[0] - 1
    out = np.zeros(n + 1)
    for k in range(1, n + 1):
        c = coef[k]
        best = k * c + log_m[0]
        for j in range(1, k):
            v = (k - j) * c + log_m[j]
            if v < best:
                best = v
            elif v > best:
                break
        out[k] = best
    return out


def sv_sup(log_mp: np.ndarray, log_m: np.ndarray, log_s: float) -> np.ndarray:
    """out[j] = max_{0<=i<j} (log_mp[j] - j*log_s - log_m[i]) / (j-i), j = 1..n.

    Exact scan; no convexity is assumed on log_mp (it may be any positive
    sequence).  out[0] is set to -inf as a placeholder.
    """
    log_mp = np.asarray(log_mp, dtype=np.float64)
    log_m = np.asarray(log_m, dtype=np.float64)
    n = log_mp.shape[0] - 1
    out = np.full(n + 1, -np.inf)
    js = np.arange(n + 1, dtype=np.float64)
    for j in range(1, n + 1):
        num = (log_mp[j] - j * log_s) - log_m[:j]
        out[j] = np.max(num / (j - js[:j]))
    return out


def pair_gap_max(log_sum: np.ndarray, log_parts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """gap[m] = max_{1<=j<m} log_sum[m] - log_parts[j] - log_parts[m-j], m = 2..n.

    Returns (gap, argj) with gap[0] = gap[1] = -inf.  Full scan keeps the
    maximizing split as a witness.
    """
    log_sum = np.asarray(log_sum, dtype=np.float64)
    log_parts = np.asarray(log_parts, dtype=np.float64)
    n = log_sum.shape[0] - 1
    gap = np.full(n + 1, -np.inf)
    argj = np.zeros(n + 1, dtype=np.int64)
    for m in range(2, n + 1):
        pair = log_parts[1:m] + log_parts[m - 1 : 0 : -1]
        j = int(np.argmin(pair))
        gap[m] = log_sum[m] - pair[j]
        argj[m] = j + 1
    return gap, argj


def assoc_sup(log_m: np.ndarray, log_t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """For each t: max over k of (k * log_t - log_m[k]) with the first argmax.

    Brute-force evaluation of the associated function of an array-backed
    sequence; the production evaluator for log-convex sequences binary-searches
    the quotients instead, and is tested against this.
    """
    log_m = np.asarray(log_m, dtype=np.float64)
    log_t = np.atleast_1d(np.asarray(log_t, dtype=np.float64))
    ks = np.arange(log_m.shape[0], dtype=np.float64)
    table = np.outer(log_t, ks) - log_m[None, :]
    arg = np.argmax(table, axis=1)
    return table[np.arange(len(log_t)), arg], arg
