"""Sketch-based trend search over time-series signals."""

from ._kernels import BACKEND
from .alignment import (
    DescriptorArrays,
    align,
    brute_force_align,
    segment_distance,
)
from .clustering import ClusterReport, Cut, agglomerate, medoid
from .constraints import evaluate, intersect, parse_constraint
from .geometry import describe, normalize, perpendicular_distance, simplify
from .ingest import ColumnMapping, dataset_summary, load_csv
from .model import (
    AlignmentResult,
    Dataset,
    DistanceMatrix,
    Extents,
    NormalizationMode,
    NormalizedSignal,
    PenaltyConfig,
    RankedMatches,
    Schema,
    SegmentDescriptor,
    Signal,
)
from .proximity import (
    CanvasSpace,
    PSConnector,
    PSElement,
    ResolutionSet,
    SemanticSpace,
    TemporalSpace,
    resolve,
    semantic_distance,
)
from .search import Index, Viewport, build_index, pairwise_matrix, query

__version__ = "0.1.0"

__all__ = [
    "AlignmentResult",
    "BACKEND",
    "CanvasSpace",
    "ClusterReport",
    "ColumnMapping",
    "Cut",
    "Dataset",
    "DescriptorArrays",
    "DistanceMatrix",
    "Extents",
    "Index",
    "NormalizationMode",
    "NormalizedSignal",
    "PSConnector",
    "PSElement",
    "PenaltyConfig",
    "RankedMatches",
    "ResolutionSet",
    "Schema",
    "SegmentDescriptor",
    "SemanticSpace",
    "Signal",
    "TemporalSpace",
    "Viewport",
    "agglomerate",
    "align",
    "brute_force_align",
    "build_index",
    "dataset_summary",
    "describe",
    "evaluate",
    "intersect",
    "load_csv",
    "medoid",
    "normalize",
    "pairwise_matrix",
    "parse_constraint",
    "perpendicular_distance",
    "query",
    "resolve",
    "segment_distance",
    "semantic_distance",
    "simplify",
]
