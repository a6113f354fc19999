import numpy as np
import pytest

from conftest import random_descriptor, random_weights
from trendsketch.alignment import (
    DescriptorArrays,
    align,
    brute_force_align,
    correspondence_cost,
    distance_matrix,
    segment_distance,
)
from trendsketch.errors import ValidationError
from trendsketch.model import PenaltyConfig, SegmentDescriptor


def desc(length=0.5, mid=0.5, mid_time=0.5, vel=0.0):
    return SegmentDescriptor(
        length=length, mid_spatial=(mid,), mid_time=mid_time, velocity=(vel,)
    )


# --- segment_distance --------------------------------------------------------

def test_identity_distance_is_zero():
    a = desc(0.7, 0.2, 0.9, -3.0)
    assert segment_distance(a, a, PenaltyConfig()) == 0.0


def test_length_term_hand_arithmetic():
    cfg = PenaltyConfig(w_len=2, w_mid=0, w_time=0, w_vel=0)
    assert segment_distance(desc(length=0.5), desc(length=0.3), cfg) == pytest.approx(0.4)


def test_velocity_clamp():
    cfg = PenaltyConfig(w_len=0, w_mid=0, w_time=0, w_vel=1, v_max=10)
    assert segment_distance(desc(vel=100.0), desc(vel=0.0), cfg) == pytest.approx(10.0)


def test_distance_symmetry(rng):
    cfg = random_weights(rng)
    for _ in range(50):
        a, b = random_descriptor(rng), random_descriptor(rng)
        assert segment_distance(a, b, cfg) == pytest.approx(segment_distance(b, a, cfg))


def test_dimension_mismatch_raises():
    a = desc()
    b = SegmentDescriptor(length=0.5, mid_spatial=(0.5, 0.5), mid_time=0.5, velocity=(0.0, 0.0))
    with pytest.raises(ValidationError):
        segment_distance(a, b, PenaltyConfig())


# --- align vs oracle -----------------------------------------------------------

def test_oracle_equivalence_random(rng):
    for _ in range(1000):
        m, n = int(rng.integers(1, 6)), int(rng.integers(1, 6))
        sk = [random_descriptor(rng) for _ in range(m)]
        sg = [random_descriptor(rng) for _ in range(n)]
        cfg = random_weights(rng)
        assert align(sk, sg, cfg).score == pytest.approx(
            brute_force_align(sk, sg, cfg).score, abs=1e-9
        )


def test_identity_alignment_scores_zero(rng):
    for _ in range(20):
        descs = [random_descriptor(rng) for _ in range(int(rng.integers(1, 8)))]
        cfg = random_weights(rng)
        res = align(descs, descs, cfg)
        assert res.score == pytest.approx(0.0, abs=1e-12)
        assert res.matches == tuple((i, i) for i in range(len(descs)))


def test_single_forced_match_length_delta():
    cfg = PenaltyConfig(w_len=1, w_mid=0, w_time=0, w_vel=0, w_count=0)
    res = brute_force_align([desc(length=0.5)], [desc(length=0.8)], cfg)
    assert res.score == pytest.approx(0.3)


def test_sketch_interior_skip_fixture():
    # S1 and S3 match B1 and B2 exactly; S2 is nothing like either, so
    # it is skipped at cost w_skip, plus the count penalty for |3-2|.
    b1 = desc(0.3, 0.2, 0.2, 1.0)
    b2 = desc(0.4, 0.8, 0.8, -1.0)
    s2 = desc(1.4, 0.5, 0.5, 8.0)
    cfg = PenaltyConfig(w_skip=0.1, w_count=0.5, w_stretch=1.0)
    res = align([b1, s2, b2], [b1, b2], cfg)
    assert res.matches == ((0, 0), (2, 1))
    assert ("sketch", 1) in res.skipped_interior
    assert res.score == pytest.approx(cfg.w_skip + cfg.w_count * 1)


def test_sub_shape_boundary_skips():
    # sketch of one segment identical to signal segment 2 of 3
    segs = [desc(0.2, 0.1, 0.1, 1.0), desc(0.5, 0.5, 0.5, -2.0), desc(0.2, 0.9, 0.9, 3.0)]
    cfg = PenaltyConfig(w_stretch=0.0, w_count=0.5)
    res = align([segs[1]], segs, cfg)
    assert res.score == pytest.approx(cfg.w_count * 2)
    assert res.matches == ((0, 1),)
    assert set(res.skipped_boundary) == {("signal", 0), ("signal", 2)}


def test_skip_threshold_behavior():
    # two-segment sketch vs three-segment signal whose middle segment is
    # alien: below a threshold on w_skip the middle signal segment is
    # skipped (interior), above it the DP prefers a distorted adjacent
    # matching that leaves a boundary segment instead.
    a = desc(0.3, 0.2, 0.2, 1.0)
    alien = desc(1.2, 0.5, 0.5, 50.0)
    b = desc(0.4, 0.8, 0.8, -1.0)
    cfg0 = PenaltyConfig(w_stretch=0.05, w_count=0.0)
    d_mismatch = segment_distance(b, alien, PenaltyConfig())
    threshold = d_mismatch + cfg0.w_stretch
    low = PenaltyConfig(w_skip=threshold - 0.5, w_stretch=0.05, w_count=0.0)
    high = PenaltyConfig(w_skip=threshold + 0.5, w_stretch=0.05, w_count=0.0)
    res_low = align([a, b], [a, alien, b], low)
    assert ("signal", 1) in res_low.skipped_interior
    assert res_low.matches == ((0, 0), (1, 2))
    res_high = align([a, b], [a, alien, b], high)
    assert res_high.matches in (((0, 0), (1, 1)), ((0, 1), (1, 2)))
    assert not res_high.skipped_interior


def test_stretch_zero_gives_exact_count_penalty(rng):
    # sketch equal to a contiguous interior run of the signal
    for _ in range(20):
        n = int(rng.integers(3, 8))
        segs = [random_descriptor(rng) for _ in range(n)]
        lo = int(rng.integers(1, n - 1))
        hi = int(rng.integers(lo + 1, n + 1))
        sketch = segs[lo:hi]
        cfg = random_weights(rng, w_stretch=0.0)
        res = align(sketch, segs, cfg)
        assert res.score == pytest.approx(cfg.w_count * abs(len(sketch) - n), abs=1e-9)


def test_score_strictly_increases_with_stretch(rng):
    segs = [random_descriptor(rng) for _ in range(5)]
    sketch = segs[1:4]
    scores = []
    for w in (0.0, 0.1, 0.5, 1.0):
        cfg = PenaltyConfig(w_stretch=w, w_count=0.0)
        scores.append(align(sketch, segs, cfg).score)
    assert all(b > a for a, b in zip(scores, scores[1:]))


def test_monotone_in_weights(rng):
    names = ("w_len", "w_mid", "w_time", "w_vel", "w_skip", "w_count", "w_stretch")
    for _ in range(100):
        m, n = int(rng.integers(1, 5)), int(rng.integers(1, 5))
        sk = [random_descriptor(rng) for _ in range(m)]
        sg = [random_descriptor(rng) for _ in range(n)]
        cfg = random_weights(rng)
        base = align(sk, sg, cfg).score
        name = names[int(rng.integers(0, len(names)))]
        bumped = PenaltyConfig(**{**{k: getattr(cfg, k) for k in names}, name: getattr(cfg, name) + 1.0})
        assert align(sk, sg, bumped).score >= base - 1e-12


def test_backtraced_correspondence_recosts_to_score(rng):
    for _ in range(200):
        m, n = int(rng.integers(1, 7)), int(rng.integers(1, 7))
        sk = [random_descriptor(rng) for _ in range(m)]
        sg = [random_descriptor(rng) for _ in range(n)]
        cfg = random_weights(rng)
        res = align(sk, sg, cfg)
        D = distance_matrix(DescriptorArrays(sk), DescriptorArrays(sg), cfg)
        recost = correspondence_cost(list(res.matches), m, n, D, cfg)
        assert recost == pytest.approx(res.score, abs=1e-9)
        # partition: every index exactly once per side
        seen_sketch = sorted([i for i, _ in res.matches]
                             + [i for side, i in res.skipped_interior + res.skipped_boundary if side == "sketch"])
        seen_signal = sorted([j for _, j in res.matches]
                             + [j for side, j in res.skipped_interior + res.skipped_boundary if side == "signal"])
        assert seen_sketch == list(range(m))
        assert seen_signal == list(range(n))


def test_empty_descriptor_list_raises():
    with pytest.raises(ValidationError):
        align([], [desc()], PenaltyConfig())
    with pytest.raises(ValidationError):
        DescriptorArrays([])


def test_brute_force_cap():
    descs = [desc()] * 7
    with pytest.raises(ValidationError):
        brute_force_align(descs, descs[:2], PenaltyConfig())
