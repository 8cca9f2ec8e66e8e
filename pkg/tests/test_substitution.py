import math

import numpy as np
import pytest
import shapely
from matplotlib.path import Path

from kochgasket.analysis import wedge_dart_diameters
from kochgasket.errors import InvariantError, ParameterError, ResourceError
from kochgasket.geom import D4, SimilarityMap, polygon_diameter
from kochgasket.substitution import (
    AspectParam,
    EmptyPolygon,
    Kind,
    Phase,
    initial_rhombus,
    inscribe_rhombus,
    new_state,
    outer_area,
    rhombi_area_sum,
    run_to,
    step,
    templates,
    union_area,
)

from oracles import max_inscribed_rhombus, shoelace

KOCH = 1 / math.sqrt(3)
ORACLE_AS = [0.2, 0.5, KOCH, 0.8]


# --- aspect parameter ---


@pytest.mark.parametrize("bad", [0.0, 1.0, -0.1, 1.5, float("nan"), float("inf")])
def test_aspect_rejects_out_of_range(bad):
    with pytest.raises(ParameterError):
        AspectParam(bad)


def test_complement_keeps_precision():
    p = AspectParam.from_complement(1e-16)
    assert p.log == pytest.approx(-1e-16, rel=1e-12)
    assert p.shrink == pytest.approx(1e-16, rel=1e-12)
    with pytest.raises(ParameterError):
        AspectParam.from_complement(0.6)


# --- initial state ---


def test_initial_rhombus_is_outer_horizontal():
    r = initial_rhombus(0.5)
    assert r.phase is Phase.HORIZONTAL
    assert (r.half_width, r.half_height) == (2.0, 1.0)
    assert r.area == outer_area(0.5) == 4.0


def test_new_state_two_darts_meeting_at_poles():
    s = new_state(0.5)
    assert s.k == 1 and len(s) == 2
    assert s.census() == {"wedges": 0, "darts": 2}
    np.testing.assert_allclose(s.contacts, [[0, 1], [0, -1]], atol=1e-15)
    assert union_area(s) == pytest.approx(3.0)
    assert rhombi_area_sum(s) == pytest.approx(1.0)


def test_iteration_two_contacts_and_wedges():
    a = 0.5
    s = run_to(a, 2)
    assert s.census() == {"wedges": 4, "darts": 0}
    np.testing.assert_allclose(s.contacts, [[0, 1], [-a, 0], [0, -1], [a, 0]], atol=1e-15)


# --- oracle: largest inscribed rhombus ---


@pytest.mark.parametrize("a", ORACLE_AS)
def test_rhombi_match_brute_force_oracle(a):
    outer = initial_rhombus(a).vertices()
    for k in (1, 2, 3):
        layer = run_to(a, k).rhombi[k]
        parents = [outer] if k == 1 else run_to(a, k - 1).polygon_vertices()
        for i, poly in enumerate(parents):
            # rhombi alternate: vertical at odd iterations
            c, w, h = max_inscribed_rhombus(poly, a, vertical=bool(k % 2))
            np.testing.assert_allclose(layer.centers[i], c, atol=1e-6)
            assert layer.half_widths[i] == pytest.approx(w, abs=1e-6)
            assert layer.half_heights[i] == pytest.approx(h, abs=1e-6)
            assert bool(layer.horizontal[i]) is (k % 2 == 0)


@pytest.mark.parametrize("a", ORACLE_AS)
@pytest.mark.parametrize("kind", list(Kind))
def test_template_rhombus_matches_oracle(a, kind):
    t = templates(a)
    c, w, h = max_inscribed_rhombus(t.vertices[kind], a, vertical=True)
    np.testing.assert_allclose(t.rhombus_center[kind], c, atol=1e-6)
    assert t.rhombus_half_width == pytest.approx(w, abs=1e-6)
    assert t.rhombus_half_height == pytest.approx(h, abs=1e-6)


def test_oracle_negative_control_wrong_slope():
    # a rhombus of the wrong aspect is a different maximiser
    a = 0.5
    t = templates(a)
    _, _, h = max_inscribed_rhombus(t.vertices[Kind.WEDGE], 0.7, vertical=True)
    assert abs(h - t.rhombus_half_height) > 1e-3


# --- templates ---


@pytest.mark.parametrize("a", ORACLE_AS)
def test_templates_have_height_one_and_ccw(a):
    t = templates(a)
    for kind in Kind:
        v = t.vertices[kind]
        assert np.ptp(v[:, 1]) == pytest.approx(1.0)
        assert shoelace(v) > 0


@pytest.mark.parametrize("a", ORACLE_AS)
def test_template_children_tile_parent_minus_rhombus(a):
    t = templates(a)
    for kind in Kind:
        parent = shapely.Polygon(t.vertices[kind])
        rh = shapely.Polygon(
            t.rhombus_center[kind] + np.array(
                [[t.rhombus_half_width, 0], [0, t.rhombus_half_height],
                 [-t.rhombus_half_width, 0], [0, -t.rhombus_half_height]]
            )
        )
        kids = []
        for k2, sc, o, sh, _ in t.children[kind]:
            kids.append(shapely.Polygon(SimilarityMap(sc, o, sh)(t.vertices[k2])))
        rest = parent.difference(rh)
        assert abs(rest.area - sum(k.area for k in kids)) < 1e-12
        assert shapely.union_all(kids).symmetric_difference(rest).area < 1e-12


# --- structure ---


def test_counts_double_each_iteration():
    s = new_state(KOCH)
    for k in range(1, 13):
        assert len(s) == 2**k == len(s.contacts)
        s = step(s)


def test_census_two_iteration_rules():
    s_prev = run_to(0.5, 2)
    s = run_to(0.5, 4)
    for k in range(4, 13, 2):
        w, d = s_prev.census()["wedges"], s_prev.census()["darts"]
        assert s.census() == {"wedges": 3 * w + 2 * d, "darts": w + 2 * d}
        s_prev, s = s, step(step(s))


def test_contact_registry_each_shared_twice():
    s = run_to(0.4, 8)
    pts, counts = s.contact_registry()
    assert len(pts) == 2**8
    assert np.all(counts == 2)


@pytest.mark.parametrize("a", [0.3, 0.5, 0.85])
def test_heights_follow_grandparent_recursion(a):
    p = AspectParam(a)
    s2, s = run_to(a, 4), run_to(a, 6)
    for _ in range(3):
        parent = s2.heights[np.arange(len(s)) // 4]
        ratio = s.heights / parent
        ok = np.isclose(ratio, a * a, rtol=1e-12) | np.isclose(ratio, p.shrink, rtol=1e-12)
        assert ok.all()
        s2, s = step(step(s2)), step(step(s))


@pytest.mark.parametrize("a", [0.3, KOCH, 0.85])
def test_polygon_heights_and_diameters(a):
    s = run_to(a, 9)
    w, d = wedge_dart_diameters(a)
    for i, v in enumerate(s.polygon_vertices()):
        assert np.ptp(v[:, 1]) == pytest.approx(s.heights[i], abs=1e-12) or \
            np.ptp(v[:, 0]) == pytest.approx(s.heights[i], abs=1e-12)
        want = (w if s.kinds[i] == Kind.WEDGE else d) * s.heights[i]
        assert polygon_diameter(v) == pytest.approx(want, abs=1e-9)


@pytest.mark.parametrize("a", [0.25, 0.5, 0.9])
def test_partition_identity(a):
    for k in range(1, 11):
        s = run_to(a, k)
        assert union_area(s) + rhombi_area_sum(s) == pytest.approx(outer_area(a), abs=1e-12)


def test_shapely_union_fills_outer_rhombus():
    a = 0.6
    s = run_to(a, 6)
    shapes = [shapely.Polygon(v) for v in s.polygon_vertices()]
    for layer in s.rhombi[1:]:
        shapes += [shapely.Polygon(v) for v in layer.vertices()]
    outer = shapely.Polygon(initial_rhombus(a).vertices())
    assert shapely.union_all(shapes).symmetric_difference(outer).area < 1e-10


@pytest.mark.parametrize("a", [0.3, 0.7])
def test_children_nest_inside_parents(a):
    s = run_to(a, 5)
    child = step(s)
    for i, v in enumerate(s.polygon_vertices()):
        parent = shapely.Polygon(v).buffer(1e-12)
        for j in (2 * i, 2 * i + 1):
            assert parent.contains(shapely.Polygon(child.polygon(j).vertices))


@pytest.mark.parametrize("a", [0.35, KOCH, 0.75])
def test_state_symmetric_under_axis_reflections(a):
    s = run_to(a, 7)
    pts = np.concatenate(s.polygon_vertices())

    def as_set(p):
        return {tuple(q) for q in np.round(p, 10) + 0.0}

    for flip in (np.array([-1.0, 1.0]), np.array([1.0, -1.0])):
        assert as_set(pts * flip) == as_set(pts)


def test_curve_is_counterclockwise():
    s = run_to(0.5, 8)
    assert shoelace(s.contacts) > 0


def test_contacts_continuous_in_a():
    c0 = run_to(0.5, 8).contacts
    c1 = run_to(0.5 + 1e-8, 8).contacts
    assert np.abs(c1 - c0).max() < 1e-6


def test_interior_points_inside_polygons():
    s = run_to(0.45, 6)
    for p, v in zip(s.interior_points(), s.polygon_vertices()):
        assert Path(v).contains_point(p)


# --- single-polygon refinement ---


def test_inscribe_rhombus_agrees_with_step():
    a = 0.55
    s = run_to(a, 5)
    nxt = step(s)
    for i in range(len(s)):
        rh, new, (c0, c1) = inscribe_rhombus(s.polygon(i), a)
        layer = nxt.rhombi[-1]
        np.testing.assert_allclose(rh.center, layer.centers[i], atol=1e-14)
        np.testing.assert_allclose(new, nxt.contacts[2 * i + 1], atol=1e-14)
        np.testing.assert_allclose(c0.vertices, nxt.polygon(2 * i).vertices, atol=1e-14)
        np.testing.assert_allclose(c1.vertices, nxt.polygon(2 * i + 1).vertices, atol=1e-14)


def test_inscribe_rhombus_rejects_foreign_polygon():
    p = run_to(0.5, 3).polygon(0)
    with pytest.raises(InvariantError):
        inscribe_rhombus(p, 0.6)
    bogus = EmptyPolygon(p.kind, SimilarityMap(1.0, D4.IDENTITY, (0.0, 0.0)), p.vertices, p.entry, p.exit)
    with pytest.raises(InvariantError):
        inscribe_rhombus(bogus, 0.5)


def test_run_to_limits():
    with pytest.raises(ParameterError):
        run_to(0.5, 0)
    with pytest.raises(ResourceError):
        run_to(0.5, 27)
    with pytest.raises(ResourceError):
        step(run_to(0.5, 3), cap=3)
