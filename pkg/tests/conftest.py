import numpy as np
import pytest

from trendsketch.model import (
    Dataset,
    NormalizationMode,
    PenaltyConfig,
    Schema,
    SegmentDescriptor,
    Signal,
    compute_global_extents,
)


def random_descriptor(rng, d=1):
    return SegmentDescriptor(
        length=float(rng.uniform(0, 1.5)),
        mid_spatial=tuple(rng.uniform(0, 1, d)),
        mid_time=float(rng.uniform(0, 1)),
        velocity=tuple(rng.uniform(-5, 5, d)),
    )


def random_weights(rng, **overrides):
    names = ("w_len", "w_mid", "w_time", "w_vel", "w_skip", "w_count", "w_stretch")
    kwargs = {n: float(rng.uniform(0, 2)) for n in names}
    kwargs.update(overrides)
    return PenaltyConfig(**kwargs)


def random_signal(rng, sid="s", n_points=None, n_measures=1, t0=0.0, t_span=100.0):
    n = n_points or int(rng.integers(4, 30))
    t = t0 + np.sort(rng.choice(np.arange(1, int(t_span * 10)), size=n, replace=False)) / 10.0
    y = rng.uniform(0, 10, (n, n_measures))
    return Signal(id=sid, dims={"name": sid}, t=t, y=y)


def make_dataset(signals, measure_names=("value",)):
    schema = Schema(
        time_field="time",
        categorical_fields=("name",),
        measure_fields=tuple(measure_names),
    )
    return Dataset(
        id="test",
        schema=schema,
        signals=tuple(signals),
        global_extents=compute_global_extents(list(signals)),
    )


@pytest.fixture
def rng():
    return np.random.default_rng(42)


@pytest.fixture
def local_cfg():
    return PenaltyConfig(mode=NormalizationMode.local())
