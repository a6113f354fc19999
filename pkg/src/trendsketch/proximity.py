"""Proximity-semantics reference resolution.

Elements on a canvas (glyphs, text, data regions) are bound pairwise
when their distance in at least one measurable space (canvas, semantic,
temporal) falls within that space's threshold. Connectors (e.g. arrows)
collapse canvas distance between their endpoints to zero. A query
resolves to the set of glyph/data-region elements reachable through the
binding graph, classified as zero, one, or many candidates.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

from .errors import ValidationError

GLYPH, TEXT, DATA_REGION = "glyph", "text", "data_region"
_KINDS = (GLYPH, TEXT, DATA_REGION)


@dataclass(frozen=True)
class PSElement:
    id: str
    kind: str
    position: tuple[float, float]
    text: str | None = None
    timestamp: float | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValidationError(f"unknown element kind {self.kind!r}")
        if self.kind == TEXT and not self.text:
            raise ValidationError(f"text element {self.id!r} has no text")
        if not all(math.isfinite(c) for c in self.position):
            raise ValidationError(f"element {self.id!r} has non-finite position")


@dataclass(frozen=True)
class PSConnector:
    from_anchor: tuple[float, float]
    to_anchor: tuple[float, float]

    def __post_init__(self):
        for anchor in (self.from_anchor, self.to_anchor):
            if not all(math.isfinite(c) for c in anchor):
                raise ValidationError("connector anchors must be finite")


@dataclass(frozen=True)
class CanvasSpace:
    """Euclidean canvas distance; a connector whose anchors snap to two
    elements collapses their distance to zero."""

    threshold: float
    snap_radius: float

    def __post_init__(self):
        if self.threshold < 0 or self.snap_radius < 0:
            raise ValidationError("canvas thresholds must be >= 0")


@dataclass(frozen=True)
class SemanticSpace:
    """Normalized edit distance between element texts, in [0,1]."""

    threshold: float

    def __post_init__(self):
        if not (0 <= self.threshold <= 1):
            raise ValidationError("semantic threshold must be in [0,1]")


@dataclass(frozen=True)
class TemporalSpace:
    """Absolute timestamp difference in seconds."""

    threshold: float

    def __post_init__(self):
        if self.threshold < 0:
            raise ValidationError("temporal threshold must be >= 0")


PSSpace = CanvasSpace | SemanticSpace | TemporalSpace

ZERO, ONE, MANY = "zero", "one", "many"


@dataclass(frozen=True)
class ResolutionSet:
    candidates: frozenset[str]
    cardinality: str

    @staticmethod
    def of(candidates: set[str]) -> "ResolutionSet":
        card = ZERO if not candidates else ONE if len(candidates) == 1 else MANY
        return ResolutionSet(candidates=frozenset(candidates), cardinality=card)


def default_spaces(canvas_width: float, canvas_height: float) -> list[PSSpace]:
    """Defaults: canvas threshold 5% of the diagonal, snap radius 2%,
    semantic 0.34 (admits one edit in a 7-char word, rejects unrelated
    words), temporal 60 s."""
    diag = math.hypot(canvas_width, canvas_height)
    return [
        CanvasSpace(threshold=0.05 * diag, snap_radius=0.02 * diag),
        SemanticSpace(threshold=0.34),
        TemporalSpace(threshold=60.0),
    ]


def levenshtein(a: str, b: str) -> int:
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def semantic_distance(a: str, b: str) -> float:
    """Levenshtein distance normalized by the longer string, after
    case-folding and whitespace trimming. Two empty strings are 0."""
    a = a.strip().casefold()
    b = b.strip().casefold()
    longest = max(len(a), len(b))
    if longest == 0:
        return 0.0
    return levenshtein(a, b) / longest


def _euclidean(p: tuple[float, float], q: tuple[float, float]) -> float:
    return math.hypot(p[0] - q[0], p[1] - q[1])


def _connector_collapses(
    a: PSElement, b: PSElement, connectors: list[PSConnector], snap_radius: float
) -> bool:
    for c in connectors:
        for p, q in ((c.from_anchor, c.to_anchor), (c.to_anchor, c.from_anchor)):
            if (
                _euclidean(p, a.position) <= snap_radius
                and _euclidean(q, b.position) <= snap_radius
            ):
                return True
    return False


def effective_distance(
    a: PSElement, b: PSElement, connectors: list[PSConnector], space: PSSpace
) -> float:
    """Distance between two elements in one space; +inf when the
    elements are not comparable there (e.g. a glyph in semantic space)."""
    if isinstance(space, CanvasSpace):
        if _connector_collapses(a, b, connectors, space.snap_radius):
            return 0.0
        return _euclidean(a.position, b.position)
    if isinstance(space, SemanticSpace):
        if a.text is None or b.text is None:
            return math.inf
        return semantic_distance(a.text, b.text)
    if isinstance(space, TemporalSpace):
        if a.timestamp is None or b.timestamp is None:
            return math.inf
        return abs(a.timestamp - b.timestamp)
    raise ValidationError(f"unknown space {space!r}")


def binding_edges(
    elements: list[PSElement], connectors: list[PSConnector], spaces: list[PSSpace]
) -> set[tuple[str, str]]:
    """Undirected edges: pairs within threshold in at least one space."""
    edges: set[tuple[str, str]] = set()
    for i, a in enumerate(elements):
        for b in elements[i + 1:]:
            for space in spaces:
                if effective_distance(a, b, connectors, space) <= space.threshold:
                    edges.add((a.id, b.id))
                    break
    return edges


def resolve(
    query: PSElement,
    elements: list[PSElement],
    connectors: list[PSConnector],
    spaces: list[PSSpace],
) -> ResolutionSet:
    """Chain resolution: all glyph/data-region elements reachable from
    the query through binding edges, across any mix of spaces."""
    everyone = [query] + [e for e in elements if e.id != query.id]
    adj: dict[str, set[str]] = {e.id: set() for e in everyone}
    for u, v in binding_edges(everyone, connectors, spaces):
        adj[u].add(v)
        adj[v].add(u)
    seen = {query.id}
    frontier = deque([query.id])
    while frontier:
        for nxt in adj[frontier.popleft()]:
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    by_id = {e.id: e for e in everyone}
    candidates = {
        eid for eid in seen
        if eid != query.id and by_id[eid].kind in (GLYPH, DATA_REGION)
    }
    return ResolutionSet.of(candidates)
