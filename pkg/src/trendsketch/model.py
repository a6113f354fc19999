"""Core domain types shared by every trendsketch module.

All types are immutable after construction (frozen dataclasses; numpy
arrays are marked read-only), so they can be shared freely across
threads.
"""
from __future__ import annotations

from dataclasses import dataclass, field
import numpy as np

from .errors import ValidationError

COORD_TOL = 1e-9


def _readonly(a: np.ndarray) -> np.ndarray:
    out = np.asarray(a, dtype=np.float64)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class Extents:
    """Per-axis min/max bounds: one (lo, hi) for time, one per measure."""

    time: tuple[float, float]
    measures: tuple[tuple[float, float], ...]

    def __post_init__(self):
        for name, (lo, hi) in [("time", self.time)] + [
            (f"measure[{i}]", m) for i, m in enumerate(self.measures)
        ]:
            if not (np.isfinite(lo) and np.isfinite(hi)) or lo > hi:
                raise ValidationError(f"invalid extents on {name}: ({lo}, {hi})")


@dataclass(frozen=True)
class Schema:
    time_field: str
    categorical_fields: tuple[str, ...]
    measure_fields: tuple[str, ...]

    def __post_init__(self):
        if not self.measure_fields:
            raise ValidationError("schema requires at least one measure field")
        if not self.categorical_fields:
            raise ValidationError("schema requires at least one categorical field")
        names = (self.time_field, *self.categorical_fields, *self.measure_fields)
        if len(set(names)) != len(names):
            raise ValidationError("schema field names must be disjoint")


@dataclass(frozen=True, eq=False)
class Signal:
    """One time-series: strictly increasing timestamps (epoch seconds)
    plus a vector of measures per point, identified by its categorical
    dimension values."""

    id: str
    dims: dict[str, str]
    t: np.ndarray  # shape (n,)
    y: np.ndarray  # shape (n, n_measures)

    def __post_init__(self):
        t = _readonly(self.t)
        y = _readonly(np.atleast_2d(self.y))
        if y.shape[0] != t.shape[0]:
            raise ValidationError(f"signal {self.id!r}: t/y length mismatch")
        if t.shape[0] < 2:
            raise ValidationError(f"signal {self.id!r}: needs at least 2 points")
        if not np.all(np.diff(t) > 0):
            raise ValidationError(f"signal {self.id!r}: timestamps must strictly increase")
        if not (np.all(np.isfinite(t)) and np.all(np.isfinite(y))):
            raise ValidationError(f"signal {self.id!r}: non-finite values")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "y", y)

    @property
    def n_points(self) -> int:
        return self.t.shape[0]

    @property
    def n_measures(self) -> int:
        return self.y.shape[1]

    def __eq__(self, other):
        return (
            isinstance(other, Signal)
            and self.id == other.id
            and self.dims == other.dims
            and np.array_equal(self.t, other.t)
            and np.array_equal(self.y, other.y)
        )

    def extents(self) -> Extents:
        return Extents(
            time=(float(self.t.min()), float(self.t.max())),
            measures=tuple(
                (float(self.y[:, j].min()), float(self.y[:, j].max()))
                for j in range(self.n_measures)
            ),
        )


@dataclass(frozen=True, eq=False)
class Dataset:
    id: str
    schema: Schema
    signals: tuple[Signal, ...]
    global_extents: Extents

    def __eq__(self, other):
        return (
            isinstance(other, Dataset)
            and self.id == other.id
            and self.schema == other.schema
            and self.global_extents == other.global_extents
            and self.signals == other.signals
        )

    def __post_init__(self):
        ids = [s.id for s in self.signals]
        if len(set(ids)) != len(ids):
            raise ValidationError("duplicate signal ids in dataset")
        d = len(self.schema.measure_fields)
        for s in self.signals:
            if s.n_measures != d:
                raise ValidationError(f"signal {s.id!r} has {s.n_measures} measures, schema has {d}")
            ext = s.extents()
            if ext.time[0] < self.global_extents.time[0] - COORD_TOL or ext.time[1] > self.global_extents.time[1] + COORD_TOL:
                raise ValidationError(f"global extents do not cover signal {s.id!r} in time")
            for j, (lo, hi) in enumerate(ext.measures):
                glo, ghi = self.global_extents.measures[j]
                if lo < glo - COORD_TOL or hi > ghi + COORD_TOL:
                    raise ValidationError(f"global extents do not cover signal {s.id!r} on measure {j}")

    def signal_by_id(self, signal_id: str) -> Signal:
        for s in self.signals:
            if s.id == signal_id:
                return s
        raise KeyError(signal_id)


def compute_global_extents(signals: list[Signal] | tuple[Signal, ...]) -> Extents:
    """Exact min/max over every point of every signal."""
    t_lo = min(float(s.t.min()) for s in signals)
    t_hi = max(float(s.t.max()) for s in signals)
    d = signals[0].n_measures
    measures = tuple(
        (
            min(float(s.y[:, j].min()) for s in signals),
            max(float(s.y[:, j].max()) for s in signals),
        )
        for j in range(d)
    )
    return Extents(time=(t_lo, t_hi), measures=measures)


@dataclass(frozen=True)
class NormalizationMode:
    """Local: each signal scaled by its own min/max. Global: scaled by
    externally fixed extents (values at the bounds map to 0/1)."""

    kind: str  # "local" | "global"
    extents: Extents | None = None

    def __post_init__(self):
        if self.kind not in ("local", "global"):
            raise ValidationError(f"unknown normalization kind {self.kind!r}")
        if self.kind == "global" and self.extents is None:
            raise ValidationError("global normalization requires extents")

    @staticmethod
    def local() -> "NormalizationMode":
        return NormalizationMode("local")

    @staticmethod
    def global_(extents: Extents) -> "NormalizationMode":
        return NormalizationMode("global", extents)


@dataclass(frozen=True, eq=False)
class NormalizedSignal:
    """A signal mapped into the unit hyper-cube: t̂ and every measure in [0,1]."""

    id: str
    t: np.ndarray  # shape (n,), values in [0,1]
    y: np.ndarray  # shape (n, d), values in [0,1]
    mode: NormalizationMode

    def __post_init__(self):
        t = _readonly(self.t)
        y = _readonly(np.atleast_2d(self.y))
        if y.shape[0] != t.shape[0]:
            raise ValidationError("t/y length mismatch")
        lo, hi = -COORD_TOL, 1.0 + COORD_TOL
        if t.min() < lo or t.max() > hi or y.min() < lo or y.max() > hi:
            raise ValidationError(f"normalized coordinates outside [0,1] for {self.id!r}")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "y", y)

    def __eq__(self, other):
        return (
            isinstance(other, NormalizedSignal)
            and self.id == other.id
            and self.mode == other.mode
            and np.array_equal(self.t, other.t)
            and np.array_equal(self.y, other.y)
        )

    @property
    def n_points(self) -> int:
        return self.t.shape[0]


@dataclass(frozen=True)
class SegmentDescriptor:
    """Per-segment tuple: length in normalized space-time, spatial and
    temporal midpoints, and per-measure velocity dŷ/dt̂."""

    length: float
    mid_spatial: tuple[float, ...]
    mid_time: float
    velocity: tuple[float, ...]

    def __post_init__(self):
        if self.length < 0:
            raise ValidationError("segment length must be >= 0")
        if not (-COORD_TOL <= self.mid_time <= 1 + COORD_TOL):
            raise ValidationError("mid_time outside [0,1]")
        for c in self.mid_spatial:
            if not (-COORD_TOL <= c <= 1 + COORD_TOL):
                raise ValidationError("mid_spatial component outside [0,1]")


DEFAULT_EPSILON = 0.02
DEFAULT_V_MAX = 10.0


@dataclass(frozen=True)
class PenaltyConfig:
    """The seven user-settable weights plus simplification tolerance,
    velocity clamp, and normalization mode."""

    w_len: float = 1.0
    w_mid: float = 1.0
    w_time: float = 1.0
    w_vel: float = 1.0
    w_skip: float = 1.0
    w_count: float = 0.5
    w_stretch: float = 0.2
    epsilon: float = DEFAULT_EPSILON
    v_max: float = DEFAULT_V_MAX
    mode: NormalizationMode = field(default_factory=NormalizationMode.local)

    def __post_init__(self):
        for name in ("w_len", "w_mid", "w_time", "w_vel", "w_skip", "w_count", "w_stretch"):
            if getattr(self, name) < 0:
                raise ValidationError(f"{name} must be >= 0")
        if self.epsilon <= 0:
            raise ValidationError("epsilon must be > 0")
        if self.v_max <= 0:
            raise ValidationError("v_max must be > 0")


@dataclass(frozen=True)
class AlignmentResult:
    """Minimum-cost monotone correspondence between two segment lists.

    `matches` is strictly increasing in both components; every segment
    index appears exactly once across matches + skips for its side.
    Skips are (side, index) with side "sketch" or "signal"; boundary
    skips are signal-side segments outside the matched window.
    """

    score: float
    matches: tuple[tuple[int, int], ...]
    skipped_interior: tuple[tuple[str, int], ...]
    skipped_boundary: tuple[tuple[str, int], ...]


@dataclass(frozen=True)
class RankedMatches:
    """(signal_id, score) entries, ascending score, ties by id."""

    entries: tuple[tuple[str, float], ...]

    def __post_init__(self):
        key = [(score, sid) for sid, score in self.entries]
        if key != sorted(key):
            raise ValidationError("RankedMatches entries are not sorted")

    def ids(self) -> list[str]:
        return [sid for sid, _ in self.entries]


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    values: np.ndarray  # (n, n)

    def __eq__(self, other):
        return isinstance(other, DistanceMatrix) and np.array_equal(self.values, other.values)

    def __post_init__(self):
        v = _readonly(self.values)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise ValidationError("distance matrix must be square")
        if not np.all(np.isfinite(v)) or v.min() < 0:
            raise ValidationError("distance matrix values must be finite and >= 0")
        if np.abs(np.diag(v)).max(initial=0.0) > COORD_TOL:
            raise ValidationError("distance matrix diagonal must be 0")
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return self.values.shape[0]
