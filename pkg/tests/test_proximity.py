import math

import numpy as np
import pytest

from trendsketch.errors import ValidationError
from trendsketch.proximity import (
    CanvasSpace,
    PSConnector,
    PSElement,
    SemanticSpace,
    TemporalSpace,
    binding_edges,
    default_spaces,
    effective_distance,
    resolve,
    semantic_distance,
)


def glyph(eid, x, y):
    return PSElement(id=eid, kind="glyph", position=(x, y))


def text(eid, x, y, s, ts=None):
    return PSElement(id=eid, kind="text", position=(x, y), text=s, timestamp=ts)


# --- semantic distance ---------------------------------------------------------

def test_semantic_identity():
    assert semantic_distance("Wrench", "Wrench") == 0.0
    assert semantic_distance("  wrench ", "WRENCH") == 0.0  # fold + trim


def test_semantic_one_insertion():
    assert semantic_distance("PPliers", "Pliers") == pytest.approx(1 / 7)


def test_semantic_unrelated_words_exceed_default_threshold():
    assert semantic_distance("Query 3", "Wrench") > 0.34
    assert semantic_distance("Query 3", "Pliers") > 0.34


def test_semantic_empty_strings():
    assert semantic_distance("", "") == 0.0
    assert semantic_distance("", "abc") == 1.0


# --- effective distance ----------------------------------------------------------

def test_connector_collapses_canvas_distance():
    label = text("label", 0, 0, "Wrench")
    icon = glyph("icon", 500, 500)
    conn = PSConnector(from_anchor=(1, 1), to_anchor=(499, 501))
    space = CanvasSpace(threshold=10.0, snap_radius=5.0)
    assert effective_distance(label, icon, [conn], space) == 0.0
    # reversed anchors collapse too (bindings are undirected)
    conn_rev = PSConnector(from_anchor=(499, 501), to_anchor=(1, 1))
    assert effective_distance(label, icon, [conn_rev], space) == 0.0
    assert effective_distance(label, icon, [], space) == pytest.approx(math.hypot(500, 500))


def test_semantic_space_distances():
    a = text("a", 0, 0, "Hammer")
    b = text("b", 100, 100, "Hammer")
    assert effective_distance(a, b, [], SemanticSpace(0.3)) == 0.0
    g = glyph("g", 0, 0)
    assert effective_distance(g, b, [], SemanticSpace(0.3)) == math.inf


def test_temporal_space():
    a = text("a", 0, 0, "x", ts=100.0)
    b = text("b", 0, 0, "y", ts=160.0)
    assert effective_distance(a, b, [], TemporalSpace(60.0)) == pytest.approx(60.0)
    c = text("c", 0, 0, "z")
    assert effective_distance(a, c, [], TemporalSpace(60.0)) == math.inf


def test_effective_distance_symmetry(rng):
    spaces = default_spaces(1000, 800)
    elems = [
        text("t1", 10, 10, "alpha", ts=5.0),
        text("t2", 700, 20, "alfa", ts=90.0),
        glyph("g1", 300, 300),
    ]
    conns = [PSConnector(from_anchor=(12, 10), to_anchor=(298, 302))]
    for a in elems:
        for b in elems:
            for sp in spaces:
                assert effective_distance(a, b, conns, sp) == effective_distance(b, a, conns, sp)


# --- resolution -----------------------------------------------------------------

def workshop_scene():
    """Labeled tool icons: hammer labeled nearby, wrench and pliers
    labeled through arrows (labels geometrically closer to other icons)."""
    hammer = glyph("hammer_icon", 100, 100)
    wrench = glyph("wrench_icon", 400, 100)
    pliers = glyph("pliers_icon", 700, 100)
    hammer_label = text("hammer_label", 105, 130, "Hammer")
    # wrench label sits right next to the hammer icon, arrow points to wrench
    wrench_label = text("wrench_label", 130, 95, "Wrench")
    pliers_label = text("pliers_label", 500, 300, "Pliers")
    connectors = [
        PSConnector(from_anchor=(132, 95), to_anchor=(399, 101)),   # wrench label -> wrench icon
        PSConnector(from_anchor=(502, 298), to_anchor=(699, 99)),   # pliers label -> pliers icon
    ]
    elements = [hammer, wrench, pliers, hammer_label, wrench_label, pliers_label]
    return elements, connectors


def spaces_for_tests():
    return [
        CanvasSpace(threshold=50.0, snap_radius=20.0),
        SemanticSpace(threshold=0.34),
        TemporalSpace(threshold=60.0),
    ]


def test_chain_wrench_query_resolves_to_wrench_icon():
    elements, connectors = workshop_scene()
    query = text("q1", 400, 700, "Wrench")
    res = resolve(query, elements, connectors, spaces_for_tests())
    # semantic edge to the label, connector-collapsed edge to the icon;
    # the label itself also canvas-binds to the hammer icon it sits on
    assert "wrench_icon" in res.candidates


def test_chain_survives_misspelling():
    elements, connectors = workshop_scene()
    query = text("q2", 400, 700, "PPliers")
    res = resolve(query, elements, connectors, spaces_for_tests())
    assert res.candidates == frozenset({"pliers_icon"})
    assert res.cardinality == "one"


def test_no_semantic_match_resolves_to_zero():
    elements, connectors = workshop_scene()
    query = text("q3", 400, 700, "Query 3")
    res = resolve(query, elements, connectors, spaces_for_tests())
    assert res.candidates == frozenset()
    assert res.cardinality == "zero"


def test_resolution_monotone_in_thresholds(rng):
    for _ in range(30):
        n = int(rng.integers(2, 8))
        words = ["alpha", "beta", "gamma", "alphaa", "betaa", "delta", "x", "y"]
        elements = []
        for i in range(n):
            kind = ["glyph", "text", "data_region"][int(rng.integers(0, 3))]
            pos = (float(rng.uniform(0, 500)), float(rng.uniform(0, 500)))
            if kind == "text":
                elements.append(PSElement(id=f"e{i}", kind=kind, position=pos,
                                          text=words[int(rng.integers(0, len(words)))]))
            else:
                elements.append(PSElement(id=f"e{i}", kind=kind, position=pos))
        query = text("q", 250, 250, "alpha")
        small = [CanvasSpace(60.0, 10.0), SemanticSpace(0.2)]
        large = [CanvasSpace(120.0, 10.0), SemanticSpace(0.5)]
        r_small = resolve(query, elements, [], small)
        r_large = resolve(query, elements, [], large)
        assert r_small.candidates <= r_large.candidates


def test_connector_only_adds_edges(rng):
    elements, _ = workshop_scene()
    query = text("q", 400, 700, "Wrench")
    spaces = spaces_for_tests()
    without = resolve(query, elements, [], spaces)
    extra = [PSConnector(from_anchor=(401, 699), to_anchor=(699, 101))]
    with_conn = resolve(query, elements, extra, spaces)
    assert without.candidates <= with_conn.candidates
    assert "pliers_icon" in with_conn.candidates


def test_reachability_equals_materialized_bfs(rng):
    elements, connectors = workshop_scene()
    query = text("q", 400, 700, "Wrench")
    spaces = spaces_for_tests()
    everyone = [query] + elements
    edges = binding_edges(everyone, connectors, spaces)
    # brute-force closure over the explicit edge set
    reach = {query.id}
    changed = True
    while changed:
        changed = False
        for u, v in edges:
            if u in reach and v not in reach:
                reach.add(v)
                changed = True
            if v in reach and u not in reach:
                reach.add(u)
                changed = True
    expected = {
        e.id for e in elements
        if e.id in reach and e.kind in ("glyph", "data_region")
    }
    assert resolve(query, elements, connectors, spaces).candidates == expected


def test_element_validation():
    with pytest.raises(ValidationError):
        PSElement(id="t", kind="text", position=(0, 0))  # text without text
    with pytest.raises(ValidationError):
        PSElement(id="g", kind="glyph", position=(float("nan"), 0))
    with pytest.raises(ValidationError):
        PSElement(id="g", kind="arrow", position=(0, 0))


def test_default_spaces_scaling():
    spaces = default_spaces(800, 600)
    canvas = spaces[0]
    assert canvas.threshold == pytest.approx(0.05 * 1000.0)
    assert canvas.snap_radius == pytest.approx(0.02 * 1000.0)
