"""Hot numeric kernels for segment alignment.

Two implementations are provided: numba @njit kernels and a pure
numpy/python fallback. Selection happens once at import time:

  * numba is used when it is importable, unless the environment
    variable TRENDSKETCH_NUMBA is set to 0/false/no/off;
  * otherwise the fallback is used.

Both variants are importable under explicit names (``*_numpy`` /
``*_numba``) so the benchmark can compare them directly.

DP state machine (4 states) for the skip cost rules:

  0  no match made yet          signal skip costs w_stretch (boundary)
  1  matched; last signal-side
     action was a match         signal skip leaves state 1 -> 3
  3  matched; pending interior
     signal skips (w_skip)      must be followed by another match
  2  suffix: no further matches signal skip costs w_stretch (boundary)

Sketch skips cost w_skip in every state. Valid end states are 0, 1, 2;
state 3 at the end would mean a trailing signal skip was charged the
interior rate, which the cost model forbids.
"""
from __future__ import annotations

import os

import numpy as np

INF = np.inf

# States
PRE, MATCHED, SUFFIX, PENDING = 0, 1, 2, 3
END_STATES = (PRE, MATCHED, SUFFIX)


def seg_distance_matrix_numpy(
    len_a, mid_a, time_a, vel_a,
    len_b, mid_b, time_b, vel_b,
    w_len, w_mid, w_time, w_vel, v_max,
):
    """Pairwise penalty-weighted descriptor distance, shape (m, n)."""
    d_len = np.abs(len_a[:, None] - len_b[None, :])
    d_mid = np.linalg.norm(mid_a[:, None, :] - mid_b[None, :, :], axis=2)
    d_time = np.abs(time_a[:, None] - time_b[None, :])
    d_vel = np.minimum(
        np.linalg.norm(vel_a[:, None, :] - vel_b[None, :, :], axis=2), v_max
    )
    return w_len * d_len + w_mid * d_mid + w_time * d_time + w_vel * d_vel


def fill_align_table_numpy(D, w_skip, w_stretch):
    """Fill the (m+1, n+1, 4) DP table for the alignment state machine."""
    m, n = D.shape
    C = np.full((m + 1, n + 1, 4), INF)
    C[0, 0, PRE] = 0.0
    for i in range(m + 1):
        for j in range(n + 1):
            if i > 0 and j > 0:
                prev = min(C[i - 1, j - 1, PRE], C[i - 1, j - 1, MATCHED], C[i - 1, j - 1, PENDING])
                cand = prev + D[i - 1, j - 1]
                if cand < C[i, j, MATCHED]:
                    C[i, j, MATCHED] = cand
            if i > 0:
                for s in range(4):
                    cand = C[i - 1, j, s] + w_skip
                    if cand < C[i, j, s]:
                        C[i, j, s] = cand
            if j > 0:
                cand = C[i, j - 1, PRE] + w_stretch
                if cand < C[i, j, PRE]:
                    C[i, j, PRE] = cand
                cand = min(C[i, j - 1, MATCHED], C[i, j - 1, PENDING]) + w_skip
                if cand < C[i, j, PENDING]:
                    C[i, j, PENDING] = cand
                cand = min(C[i, j - 1, MATCHED], C[i, j - 1, SUFFIX]) + w_stretch
                if cand < C[i, j, SUFFIX]:
                    C[i, j, SUFFIX] = cand
    return C


def _disabled_by_env() -> bool:
    return os.environ.get("TRENDSKETCH_NUMBA", "1").strip().lower() in (
        "0", "false", "no", "off",
    )


seg_distance_matrix_numba = None
fill_align_table_numba = None

try:
    import numba

    @numba.njit(cache=True)
    def seg_distance_matrix_numba(  # noqa: F811
        len_a, mid_a, time_a, vel_a,
        len_b, mid_b, time_b, vel_b,
        w_len, w_mid, w_time, w_vel, v_max,
    ):
        m = len_a.shape[0]
        n = len_b.shape[0]
        d = mid_a.shape[1]
        D = np.empty((m, n))
        for i in range(m):
            for j in range(n):
                d_mid = 0.0
                d_vel = 0.0
                for k in range(d):
                    dm = mid_a[i, k] - mid_b[j, k]
                    d_mid += dm * dm
                    dv = vel_a[i, k] - vel_b[j, k]
                    d_vel += dv * dv
                d_mid = np.sqrt(d_mid)
                d_vel = np.sqrt(d_vel)
                if d_vel > v_max:
                    d_vel = v_max
                D[i, j] = (
                    w_len * abs(len_a[i] - len_b[j])
                    + w_mid * d_mid
                    + w_time * abs(time_a[i] - time_b[j])
                    + w_vel * d_vel
                )
        return D

    @numba.njit(cache=True)
    def fill_align_table_numba(D, w_skip, w_stretch):  # noqa: F811
        m, n = D.shape
        C = np.full((m + 1, n + 1, 4), np.inf)
        C[0, 0, 0] = 0.0
        for i in range(m + 1):
            for j in range(n + 1):
                if i > 0 and j > 0:
                    prev = C[i - 1, j - 1, 0]
                    if C[i - 1, j - 1, 1] < prev:
                        prev = C[i - 1, j - 1, 1]
                    if C[i - 1, j - 1, 3] < prev:
                        prev = C[i - 1, j - 1, 3]
                    cand = prev + D[i - 1, j - 1]
                    if cand < C[i, j, 1]:
                        C[i, j, 1] = cand
                if i > 0:
                    for s in range(4):
                        cand = C[i - 1, j, s] + w_skip
                        if cand < C[i, j, s]:
                            C[i, j, s] = cand
                if j > 0:
                    cand = C[i, j - 1, 0] + w_stretch
                    if cand < C[i, j, 0]:
                        C[i, j, 0] = cand
                    prev = C[i, j - 1, 1]
                    if C[i, j - 1, 3] < prev:
                        prev = C[i, j - 1, 3]
                    cand = prev + w_skip
                    if cand < C[i, j, 3]:
                        C[i, j, 3] = cand
                    prev = C[i, j - 1, 1]
                    if C[i, j - 1, 2] < prev:
                        prev = C[i, j - 1, 2]
                    cand = prev + w_stretch
                    if cand < C[i, j, 2]:
                        C[i, j, 2] = cand
        return C

    _HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is an optional extra
    _HAS_NUMBA = False


if _HAS_NUMBA and not _disabled_by_env():
    BACKEND = "numba"
    seg_distance_matrix = seg_distance_matrix_numba
    fill_align_table = fill_align_table_numba
else:
    BACKEND = "numpy"
    seg_distance_matrix = seg_distance_matrix_numpy
    fill_align_table = fill_align_table_numpy
