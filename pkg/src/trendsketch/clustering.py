"""Agglomerative clustering over the pairwise score matrix, with medoid
representatives.

Bottom-up average linkage (unweighted pair-group mean of cross-cluster
distances). The cut is either a target cluster count k or a distance
threshold tau (stop before any merge whose linkage distance exceeds it).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .model import DistanceMatrix


@dataclass(frozen=True)
class Cut:
    """Stopping rule: exactly one of k (cluster count) or tau (distance
    threshold) must be set."""

    k: int | None = None
    tau: float | None = None

    def __post_init__(self):
        if (self.k is None) == (self.tau is None):
            raise ValidationError("cut must set exactly one of k or tau")
        if self.k is not None and self.k < 1:
            raise ValidationError("k must be >= 1")
        if self.tau is not None and self.tau < 0:
            raise ValidationError("tau must be >= 0")


@dataclass(frozen=True)
class Cluster:
    member_ids: tuple[str, ...]
    medoid_id: str


@dataclass(frozen=True)
class Merge:
    """One dendrogram step: which member sets were merged, at what
    average-linkage distance."""

    left: tuple[int, ...]
    right: tuple[int, ...]
    distance: float


@dataclass(frozen=True)
class ClusterReport:
    clusters: tuple[Cluster, ...]
    cut: Cut
    linkage: str  # "average"
    merges: tuple[Merge, ...]


def medoid(member_ids: list[str], matrix: DistanceMatrix, ids: list[str]) -> str:
    """Member minimizing the summed distance to all other members; ties
    go to the lowest id."""
    if not member_ids:
        raise ValidationError("medoid of an empty cluster")
    pos = {sid: i for i, sid in enumerate(ids)}
    rows = [pos[sid] for sid in member_ids]
    sub = matrix.values[np.ix_(rows, rows)]
    sums = sub.sum(axis=1)
    best = min(range(len(member_ids)), key=lambda i: (sums[i], member_ids[i]))
    return member_ids[best]


def _average_linkage(matrix: np.ndarray, a: list[int], b: list[int]) -> float:
    return float(matrix[np.ix_(a, b)].mean())


def agglomerate(matrix: DistanceMatrix, cut: Cut, ids: list[str] | None = None) -> ClusterReport:
    """Bottom-up merging with average linkage.

    Merge ties are broken by the smallest (min-index, min-index) pair of
    the candidate cluster pair. With a tau cut, merging stops before the
    first merge whose linkage distance exceeds tau.
    """
    n = matrix.n
    if ids is None:
        ids = [str(i) for i in range(n)]
    if len(ids) != n:
        raise ValidationError("ids length must match matrix size")
    if cut.k is not None and cut.k > n:
        raise ValidationError(f"k={cut.k} exceeds signal count {n}")
    if not np.allclose(matrix.values, matrix.values.T, atol=1e-12):
        raise ValidationError("distance matrix must be symmetric")

    clusters: list[list[int]] = [[i] for i in range(n)]
    merges: list[Merge] = []
    target = cut.k if cut.k is not None else 1
    while len(clusters) > target:
        best = None
        for ai in range(len(clusters)):
            for bi in range(ai + 1, len(clusters)):
                d = _average_linkage(matrix.values, clusters[ai], clusters[bi])
                lo, hi = sorted((clusters[ai][0], clusters[bi][0]))
                key = (d, lo, hi)
                if best is None or key < best[0]:
                    best = (key, ai, bi)
        (d, _, _), ai, bi = best
        if cut.tau is not None and d > cut.tau:
            break
        merges.append(
            Merge(left=tuple(clusters[ai]), right=tuple(clusters[bi]), distance=d)
        )
        merged = sorted(clusters[ai] + clusters[bi])
        clusters = [c for i, c in enumerate(clusters) if i not in (ai, bi)]
        clusters.append(merged)
        clusters.sort(key=lambda c: c[0])

    clusters.sort(key=lambda c: c[0])
    out = []
    for c in clusters:
        member_ids = [ids[i] for i in c]
        out.append(Cluster(member_ids=tuple(member_ids), medoid_id=medoid(member_ids, matrix, ids)))
    return ClusterReport(
        clusters=tuple(out), cut=cut, linkage="average", merges=tuple(merges)
    )
