"""Penalty-weighted segment distance and dynamic-programming alignment.

The cost model: matched segment pairs pay the weighted descriptor
distance; a skipped sketch segment always costs w_skip; a skipped
signal segment costs w_stretch when it is a boundary segment (before
the first or after the last matched signal segment, or when there are
no matches at all) and w_skip when it is interior; finally
w_count * |m - n| is added for the segment-count difference.
"""
from __future__ import annotations

from itertools import combinations

import numpy as np

from . import _kernels
from .errors import ValidationError
from .model import AlignmentResult, PenaltyConfig, SegmentDescriptor

SKETCH, SIGNAL = "sketch", "signal"


class DescriptorArrays:
    """Column layout of a descriptor list, ready for the kernels."""

    __slots__ = ("length", "mid_spatial", "mid_time", "velocity")

    def __init__(self, descriptors: list[SegmentDescriptor]):
        if not descriptors:
            raise ValidationError("empty descriptor list")
        self.length = np.array([d.length for d in descriptors])
        self.mid_spatial = np.array([d.mid_spatial for d in descriptors])
        self.mid_time = np.array([d.mid_time for d in descriptors])
        self.velocity = np.array([d.velocity for d in descriptors])

    @property
    def n(self) -> int:
        return self.length.shape[0]

    @property
    def dim(self) -> int:
        return self.mid_spatial.shape[1]


def _as_arrays(descs) -> DescriptorArrays:
    return descs if isinstance(descs, DescriptorArrays) else DescriptorArrays(list(descs))


def segment_distance(a: SegmentDescriptor, b: SegmentDescriptor, cfg: PenaltyConfig) -> float:
    """Weighted per-property distance between two segment descriptors.

    Velocity differences are clamped at cfg.v_max (dŷ/dt̂ is unbounded
    as segments approach vertical)."""
    if len(a.mid_spatial) != len(b.mid_spatial):
        raise ValidationError("descriptor dimensionality mismatch")
    d_vel = min(
        float(np.linalg.norm(np.subtract(a.velocity, b.velocity))), cfg.v_max
    )
    return (
        cfg.w_len * abs(a.length - b.length)
        + cfg.w_mid * float(np.linalg.norm(np.subtract(a.mid_spatial, b.mid_spatial)))
        + cfg.w_time * abs(a.mid_time - b.mid_time)
        + cfg.w_vel * d_vel
    )


def distance_matrix(sketch: DescriptorArrays, signal: DescriptorArrays, cfg: PenaltyConfig) -> np.ndarray:
    if sketch.dim != signal.dim:
        raise ValidationError("descriptor dimensionality mismatch")
    return _kernels.seg_distance_matrix(
        sketch.length, sketch.mid_spatial, sketch.mid_time, sketch.velocity,
        signal.length, signal.mid_spatial, signal.mid_time, signal.velocity,
        cfg.w_len, cfg.w_mid, cfg.w_time, cfg.w_vel, cfg.v_max,
    )


def correspondence_cost(
    matches: list[tuple[int, int]], m: int, n: int, D: np.ndarray, cfg: PenaltyConfig
) -> float:
    """Cost of an explicit correspondence under the model above.

    Independent of the DP: used by the brute-force oracle and for
    re-costing backtraced alignments."""
    total = 0.0
    for i, j in matches:
        total += float(D[i, j])
    total += cfg.w_skip * (m - len(matches))  # sketch skips
    if matches:
        lo = min(j for _, j in matches)
        hi = max(j for _, j in matches)
        matched_j = {j for _, j in matches}
        for j in range(n):
            if j in matched_j:
                continue
            total += cfg.w_stretch if (j < lo or j > hi) else cfg.w_skip
    else:
        total += cfg.w_stretch * n
    total += cfg.w_count * abs(m - n)
    return total


def _classify_skips(matches, m, n):
    skipped_interior, skipped_boundary = [], []
    matched_i = {i for i, _ in matches}
    for i in range(m):
        if i not in matched_i:
            skipped_interior.append((SKETCH, i))
    matched_j = {j for _, j in matches}
    lo = min(matched_j) if matched_j else n
    hi = max(matched_j) if matched_j else -1
    for j in range(n):
        if j in matched_j:
            continue
        if j < lo or j > hi:
            skipped_boundary.append((SIGNAL, j))
        else:
            skipped_interior.append((SIGNAL, j))
    return tuple(skipped_interior), tuple(skipped_boundary)


def _backtrace(C: np.ndarray, D: np.ndarray, w_skip: float, w_stretch: float):
    """Recover one optimal correspondence from the filled table.

    Ties are broken preferring match > sketch-skip > signal-skip so the
    backtrace is deterministic. Predecessor checks recompute the exact
    float sums the fill used, so equality tests are exact.
    """
    m, n = D.shape
    PRE, MATCHED, SUFFIX, PENDING = (
        _kernels.PRE, _kernels.MATCHED, _kernels.SUFFIX, _kernels.PENDING,
    )
    s = min(_kernels.END_STATES, key=lambda st: (C[m, n, st], st))
    i, j = m, n
    matches: list[tuple[int, int]] = []
    while i > 0 or j > 0:
        v = C[i, j, s]
        # match
        if i > 0 and j > 0 and s == MATCHED:
            moved = False
            for sp in (MATCHED, PRE, PENDING):
                if C[i - 1, j - 1, sp] + D[i - 1, j - 1] == v:
                    matches.append((i - 1, j - 1))
                    i, j, s = i - 1, j - 1, sp
                    moved = True
                    break
            if moved:
                continue
        # sketch skip
        if i > 0 and C[i - 1, j, s] + w_skip == v:
            i -= 1
            continue
        # signal skip
        if j > 0:
            if s == PRE and C[i, j - 1, PRE] + w_stretch == v:
                j -= 1
                continue
            if s == PENDING:
                moved = False
                for sp in (MATCHED, PENDING):
                    if C[i, j - 1, sp] + w_skip == v:
                        j, s = j - 1, sp
                        moved = True
                        break
                if moved:
                    continue
            if s == SUFFIX:
                moved = False
                for sp in (MATCHED, SUFFIX):
                    if C[i, j - 1, sp] + w_stretch == v:
                        j, s = j - 1, sp
                        moved = True
                        break
                if moved:
                    continue
        raise AssertionError("backtrace failed: inconsistent DP table")
    matches.reverse()
    return matches


def align(sketch, signal, cfg: PenaltyConfig) -> AlignmentResult:
    """Least-cost monotone correspondence between two segment lists.

    Accepts lists of SegmentDescriptor or prepacked DescriptorArrays.
    A score of zero means exact structural equivalence.
    """
    a = _as_arrays(sketch)
    b = _as_arrays(signal)
    D = _kernels.seg_distance_matrix(
        a.length, a.mid_spatial, a.mid_time, a.velocity,
        b.length, b.mid_spatial, b.mid_time, b.velocity,
        cfg.w_len, cfg.w_mid, cfg.w_time, cfg.w_vel, cfg.v_max,
    )
    return align_from_matrix(D, cfg)


def align_from_matrix(D: np.ndarray, cfg: PenaltyConfig) -> AlignmentResult:
    """Run the DP given a precomputed segment-distance matrix."""
    m, n = D.shape
    if m < 1 or n < 1:
        raise ValidationError("alignment requires at least one segment per side")
    C = _kernels.fill_align_table(D, cfg.w_skip, cfg.w_stretch)
    base = min(C[m, n, s] for s in _kernels.END_STATES)
    matches = _backtrace(C, D, cfg.w_skip, cfg.w_stretch)
    score = float(base + cfg.w_count * abs(m - n))
    interior, boundary = _classify_skips(matches, m, n)
    return AlignmentResult(
        score=score,
        matches=tuple(matches),
        skipped_interior=interior,
        skipped_boundary=boundary,
    )


def align_score(sketch: DescriptorArrays, signal: DescriptorArrays, cfg: PenaltyConfig) -> float:
    """Score-only fast path (no backtrace) for bulk ranking."""
    D = _kernels.seg_distance_matrix(
        sketch.length, sketch.mid_spatial, sketch.mid_time, sketch.velocity,
        signal.length, signal.mid_spatial, signal.mid_time, signal.velocity,
        cfg.w_len, cfg.w_mid, cfg.w_time, cfg.w_vel, cfg.v_max,
    )
    m, n = D.shape
    C = _kernels.fill_align_table(D, cfg.w_skip, cfg.w_stretch)
    base = min(C[m, n, s] for s in _kernels.END_STATES)
    return float(base + cfg.w_count * abs(m - n))


BRUTE_FORCE_CAP = 6


def brute_force_align(sketch, signal, cfg: PenaltyConfig) -> AlignmentResult:
    """Exhaustive minimum over all monotone correspondences.

    Test oracle for the DP; exponential, capped at 6 segments per side.
    """
    a = _as_arrays(sketch)
    b = _as_arrays(signal)
    m, n = a.n, b.n
    if m > BRUTE_FORCE_CAP or n > BRUTE_FORCE_CAP:
        raise ValidationError(f"brute force capped at {BRUTE_FORCE_CAP} segments per side")
    D = distance_matrix(a, b, cfg)

    best_cost = np.inf
    best: list[tuple[int, int]] = []
    for k in range(min(m, n) + 1):
        for rows in combinations(range(m), k):
            for cols in combinations(range(n), k):
                pairing = list(zip(rows, cols))  # both strictly increasing
                cost = correspondence_cost(pairing, m, n, D, cfg)
                # ties: prefer more matches, then lexicographic pairing
                if cost < best_cost or (
                    cost == best_cost
                    and (-len(pairing), pairing) < (-len(best), best)
                ):
                    best_cost = cost
                    best = pairing
    interior, boundary = _classify_skips(best, m, n)
    return AlignmentResult(
        score=float(best_cost),
        matches=tuple(best),
        skipped_interior=interior,
        skipped_boundary=boundary,
    )
