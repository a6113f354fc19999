"""Normalization, Douglas-Peucker simplification, and per-segment
descriptor extraction.

All functions are pure and operate in normalized (t̂, ŷ) space where
both time and every measure live in [0,1].
"""
from __future__ import annotations

import numpy as np

from .errors import DegenerateSegmentError, RangeViolationError, ValidationError
from .model import (
    NormalizationMode,
    NormalizedSignal,
    SegmentDescriptor,
    Signal,
)


def _scale_axis(values: np.ndarray, lo: float, hi: float) -> np.ndarray:
    # Degenerate axis (constant): map everything to the middle.
    if hi <= lo:
        return np.full_like(values, 0.5)
    return (values - lo) / (hi - lo)


def normalize(signal: Signal, mode: NormalizationMode) -> NormalizedSignal:
    """Min-max scale a signal into the unit hyper-cube.

    Local mode uses the signal's own per-axis range; global mode uses
    the externally fixed extents in `mode` and raises RangeViolationError
    if the signal falls outside them.
    """
    if mode.kind == "local":
        t_lo, t_hi = float(signal.t.min()), float(signal.t.max())
        bounds = [(float(signal.y[:, j].min()), float(signal.y[:, j].max()))
                  for j in range(signal.n_measures)]
    else:
        ext = mode.extents
        if len(ext.measures) != signal.n_measures:
            raise ValidationError("global extents dimensionality mismatch")
        t_lo, t_hi = ext.time
        if signal.t.min() < t_lo or signal.t.max() > t_hi:
            raise RangeViolationError("time")
        bounds = list(ext.measures)
        for j, (lo, hi) in enumerate(bounds):
            if signal.y[:, j].min() < lo or signal.y[:, j].max() > hi:
                raise RangeViolationError(f"measure[{j}]")

    t_hat = _scale_axis(signal.t, t_lo, t_hi)
    y_hat = np.column_stack(
        [_scale_axis(signal.y[:, j], lo, hi) for j, (lo, hi) in enumerate(bounds)]
    )
    return NormalizedSignal(id=signal.id, t=t_hat, y=y_hat, mode=mode)


def perpendicular_distance(p: np.ndarray, a: np.ndarray, b: np.ndarray) -> float:
    """Euclidean distance from p to the infinite line through a and b.

    Works in any dimension; if a == b the distance to the point a is
    returned.
    """
    p = np.asarray(p, dtype=np.float64)
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    ab = b - a
    denom = float(np.dot(ab, ab))
    if denom == 0.0:
        return float(np.linalg.norm(p - a))
    ap = p - a
    proj = a + (float(np.dot(ap, ab)) / denom) * ab
    return float(np.linalg.norm(p - proj))


def _dp_mask(points: np.ndarray, epsilon: float) -> np.ndarray:
    """Douglas-Peucker keep-mask over an (n, d) polyline.

    Iterative (explicit stack) version of the classic recursion; keeps
    endpoints, splits at the point of maximum distance to the chord when
    that distance exceeds epsilon.
    """
    n = points.shape[0]
    keep = np.zeros(n, dtype=bool)
    keep[0] = keep[-1] = True
    stack = [(0, n - 1)]
    while stack:
        lo, hi = stack.pop()
        if hi - lo < 2:
            continue
        a, b = points[lo], points[hi]
        ab = b - a
        denom = float(np.dot(ab, ab))
        seg = points[lo + 1:hi] - a
        if denom == 0.0:
            dists = np.linalg.norm(seg, axis=1)
        else:
            t = seg @ ab / denom
            dists = np.linalg.norm(seg - np.outer(t, ab), axis=1)
        k = int(np.argmax(dists))
        if dists[k] > epsilon:
            mid = lo + 1 + k
            keep[mid] = True
            stack.append((lo, mid))
            stack.append((mid, hi))
    return keep


def simplify(signal: NormalizedSignal, epsilon: float) -> NormalizedSignal:
    """Douglas-Peucker simplification of the polyline in (t̂, ŷ) space.

    First and last points are always retained; every removed point lies
    within epsilon of the simplified polyline.
    """
    if epsilon <= 0:
        raise ValidationError("epsilon must be > 0")
    if signal.n_points < 2:
        raise ValidationError("simplify requires at least 2 points")
    pts = np.column_stack([signal.t, signal.y])
    keep = _dp_mask(pts, epsilon)
    return NormalizedSignal(
        id=signal.id, t=signal.t[keep], y=signal.y[keep], mode=signal.mode
    )


def dedupe_time(t: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Merge consecutive points with identical time, keeping the last.

    Freehand sketches can stall in x; raw signals are already strictly
    increasing so this is a no-op for them.
    """
    t = np.asarray(t, dtype=np.float64)
    y = np.atleast_2d(np.asarray(y, dtype=np.float64))
    keep = np.ones(t.shape[0], dtype=bool)
    keep[:-1] = t[1:] != t[:-1]
    return t[keep], y[keep]


def describe(signal: NormalizedSignal) -> list[SegmentDescriptor]:
    """Per-segment descriptors for each consecutive point pair:
    length (in full normalized space-time), spatial midpoint, temporal
    midpoint, and velocity dŷ/dt̂ per measure."""
    if signal.n_points < 2:
        raise ValidationError("describe requires at least 2 points")
    dt = np.diff(signal.t)
    if np.any(dt == 0):
        raise DegenerateSegmentError(
            f"zero time extent on a segment of {signal.id!r}; deduplicate first"
        )
    dy = np.diff(signal.y, axis=0)
    lengths = np.sqrt(dt**2 + (dy**2).sum(axis=1))
    mid_t = (signal.t[:-1] + signal.t[1:]) / 2.0
    mid_y = (signal.y[:-1] + signal.y[1:]) / 2.0
    vel = dy / dt[:, None]
    return [
        SegmentDescriptor(
            length=float(lengths[k]),
            mid_spatial=tuple(mid_y[k]),
            mid_time=float(mid_t[k]),
            velocity=tuple(vel[k]),
        )
        for k in range(dt.shape[0])
    ]
