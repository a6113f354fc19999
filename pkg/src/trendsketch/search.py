"""Index construction, sketch query (1xN ranking) and all-pairs matrix.

Database signals are normalized, simplified, and described once at
index build time; queries run the same pipeline on the sketch and align
it against every indexed signal.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .alignment import DescriptorArrays, align, align_score
from .errors import (
    DegenerateSketchError,
    StaleIndexError,
    TrendsketchError,
    ValidationError,
)
from .geometry import dedupe_time, describe, normalize, simplify
from .model import (
    AlignmentResult,
    Dataset,
    DistanceMatrix,
    NormalizationMode,
    NormalizedSignal,
    PenaltyConfig,
    RankedMatches,
)

DEFAULT_K = 10


@dataclass(frozen=True)
class IndexEntry:
    signal_id: str
    normalized: NormalizedSignal
    descriptors: DescriptorArrays


@dataclass(frozen=True)
class Viewport:
    """Canvas-to-data mapping for global-mode sketches: the canvas
    rectangle [0,width]x[0,height] covers t_range x value_range, with
    y=0 at the top of the canvas (up = larger value)."""

    width: float
    height: float
    t_range: tuple[float, float]
    value_range: tuple[float, float]


@dataclass(frozen=True)
class Index:
    """Immutable per-config precomputation over a dataset."""

    dataset_id: str
    mode: NormalizationMode
    epsilon: float
    entries: tuple[IndexEntry, ...]
    unindexable: tuple[tuple[str, str], ...]  # (signal_id, reason)

    @property
    def signal_ids(self) -> list[str]:
        return [e.signal_id for e in self.entries]


def build_index(dataset: Dataset, cfg: PenaltyConfig) -> Index:
    """Normalize, simplify, and describe every signal of the dataset.

    Signals that fail (global extents violation, degenerate after
    simplification) are recorded as unindexable; only an entirely
    unindexable dataset is an error.
    """
    if not dataset.signals:
        raise ValidationError("dataset has no signals")
    entries: list[IndexEntry] = []
    unindexable: list[tuple[str, str]] = []
    for signal in dataset.signals:
        try:
            norm = normalize(signal, cfg.mode)
            simp = simplify(norm, cfg.epsilon)
            if simp.n_points < 2:
                raise ValidationError("degenerates to fewer than 2 points")
            descs = DescriptorArrays(describe(simp))
        except TrendsketchError as exc:
            unindexable.append((signal.id, str(exc)))
            continue
        entries.append(IndexEntry(signal.id, simp, descs))
    if not entries:
        raise ValidationError("no indexable signals in dataset")
    return Index(
        dataset_id=dataset.id,
        mode=cfg.mode,
        epsilon=cfg.epsilon,
        entries=tuple(entries),
        unindexable=tuple(unindexable),
    )


def _check_config(index: Index, cfg: PenaltyConfig) -> None:
    if cfg.mode != index.mode or cfg.epsilon != index.epsilon:
        raise StaleIndexError(
            "query (mode, epsilon) differs from index build config; rebuild the index"
        )


def sketch_to_normalized(
    points, cfg: PenaltyConfig, viewport: Viewport | None = None
) -> NormalizedSignal:
    """Map canvas points (x right, y down) into normalized space.

    x becomes t̂ and y is flipped so that up means a larger value.
    Local mode scales by the sketch's own bounding box; global mode
    needs a viewport to place the sketch in data coordinates first.
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValidationError("sketch points must be a list of (x, y) pairs")
    # consecutive duplicates, then stalled-x points (keep the last)
    keep = np.ones(pts.shape[0], dtype=bool)
    keep[1:] = np.any(pts[1:] != pts[:-1], axis=1)
    pts = pts[keep]
    t, y = dedupe_time(pts[:, 0], pts[:, 1:2])
    if t.shape[0] < 2:
        raise DegenerateSketchError("sketch needs at least 2 distinct points")

    if cfg.mode.kind == "local":
        t_lo, t_hi = float(t.min()), float(t.max())
        y_lo, y_hi = float(y.min()), float(y.max())
        t_hat = (t - t_lo) / (t_hi - t_lo)
        # canvas y grows downward: flip so larger data values are up
        y_hat = np.full_like(y, 0.5) if y_hi <= y_lo else (y_hi - y) / (y_hi - y_lo)
    else:
        if viewport is None:
            raise ValidationError("global mode requires a canvas viewport")
        ext = cfg.mode.extents
        ta, tb = viewport.t_range
        va, vb = viewport.value_range
        t_data = ta + (t / viewport.width) * (tb - ta)
        v_data = va + (1.0 - y / viewport.height) * (vb - va)
        gt_lo, gt_hi = ext.time
        gv_lo, gv_hi = ext.measures[0]
        t_hat = (t_data - gt_lo) / (gt_hi - gt_lo)
        y_hat = (v_data - gv_lo) / (gv_hi - gv_lo)
        if t_hat.min() < -1e-9 or t_hat.max() > 1 + 1e-9 or y_hat.min() < -1e-9 or y_hat.max() > 1 + 1e-9:
            raise ValidationError("sketch falls outside global extents under the viewport")
        t_hat = np.clip(t_hat, 0.0, 1.0)
        y_hat = np.clip(y_hat, 0.0, 1.0)
    return NormalizedSignal(id="sketch", t=t_hat, y=y_hat.reshape(len(t_hat), -1), mode=cfg.mode)


def sketch_descriptors(
    points, cfg: PenaltyConfig, viewport: Viewport | None = None
) -> DescriptorArrays:
    norm = sketch_to_normalized(points, cfg, viewport)
    simp = simplify(norm, cfg.epsilon)
    return DescriptorArrays(describe(simp))


def query(
    index: Index,
    sketch_points,
    cfg: PenaltyConfig,
    k: int = DEFAULT_K,
    viewport: Viewport | None = None,
    with_alignments: bool = False,
):
    """Rank indexed signals by alignment score against a canvas sketch.

    Returns RankedMatches, or (RankedMatches, {signal_id: AlignmentResult})
    when with_alignments is set.
    """
    _check_config(index, cfg)
    if k < 1:
        raise ValidationError("k must be >= 1")
    sketch = sketch_descriptors(sketch_points, cfg, viewport)
    scored = sorted(
        ((e.signal_id, align_score(sketch, e.descriptors, cfg)) for e in index.entries),
        key=lambda item: (item[1], item[0]),
    )
    top = scored[:k]
    ranked = RankedMatches(entries=tuple(top))
    if not with_alignments:
        return ranked
    by_id = {e.signal_id: e for e in index.entries}
    alignments: dict[str, AlignmentResult] = {
        sid: align(sketch, by_id[sid].descriptors, cfg) for sid, _ in top
    }
    return ranked, alignments


def pairwise_matrix(index: Index, cfg: PenaltyConfig, max_workers: int | None = None) -> DistanceMatrix:
    """All-pairs alignment scores (N x N), diagonal exactly 0.

    Computed over the upper triangle in parallel and mirrored; symmetry
    of the cost model is asserted in tests, not assumed here beyond the
    mirroring.
    """
    _check_config(index, cfg)
    n = len(index.entries)
    if n == 0:
        raise ValidationError("empty index")
    values = np.zeros((n, n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]

    def compute(pair):
        i, j = pair
        return i, j, align_score(index.entries[i].descriptors, index.entries[j].descriptors, cfg)

    if max_workers == 1 or len(pairs) < 32:
        results = map(compute, pairs)
        for i, j, s in results:
            values[i, j] = values[j, i] = s
    else:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            for i, j, s in pool.map(compute, pairs):
                values[i, j] = values[j, i] = s
    return DistanceMatrix(values=values)
