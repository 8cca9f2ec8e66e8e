import math

import numpy as np
import pytest
import shapely

from kochgasket.analysis import dimension
from kochgasket.curve import convergence_bound
from kochgasket.errors import ParameterError, ResourceError
from kochgasket.geom import cloud_distance
from kochgasket.ifs import (
    attractor,
    max_polygon_diameter,
    measured_ratios,
    moran_dimension,
    quadrant_contacts,
    quadrant_system,
    rhombus_ahgd_area,
    system_invariants,
    verify_open_set,
    verify_self_similarity,
)
from kochgasket.substitution import run_to

KOCH = 1 / math.sqrt(3)
AS = [0.2, 0.5, KOCH, 0.8]


@pytest.fixture(scope="module", params=AS)
def system(request):
    return quadrant_system(request.param)


def test_anchor_points(system):
    a = system.a
    P = system.points
    assert P["A"] == (a, 0.0) and P["C"] == (0.0, 1.0)
    assert P["B"] == pytest.approx(((1 + a * a) / (2 * a), (1 - a * a) / 2))
    # G is the contact added at iteration 3, H the one from iteration 4
    assert P["G"] == pytest.approx((a, 1 - a * a), abs=1e-12)
    r = (1 - a * a) / 2
    assert P["H"] == pytest.approx((a + a * r, r), abs=1e-12)


def test_invariants_all_hold(system):
    inv = system_invariants(system)
    assert all(inv.values()), inv


def test_ratios_measured(system):
    for rs, want in zip(measured_ratios(system, n_pairs=500, seed=3), system.ratios):
        np.testing.assert_allclose(rs, want, rtol=1e-12)


def test_orientations(system):
    # S1 and S3 reverse orientation, S2 keeps it
    assert [m.is_reflection for m in system.maps] == [True, False, True]


def test_ahgd_area(system):
    a = system.a
    assert rhombus_ahgd_area(system) == pytest.approx(a * (1 - a * a) ** 2 / 2, abs=1e-12)


def test_moran_agrees_with_dimension(system):
    assert moran_dimension(system.ratios) == pytest.approx(dimension(system.a).s, abs=1e-12)


def test_moran_classical_values():
    assert moran_dimension([1 / 3] * 4) == pytest.approx(math.log(4) / math.log(3), abs=1e-14)
    assert moran_dimension([0.5, 0.5]) == pytest.approx(1.0, abs=1e-14)
    assert moran_dimension([KOCH, 1 / 3, 1 / 3]) == pytest.approx(math.log(4) / math.log(3), abs=1e-12)
    with pytest.raises(ParameterError):
        moran_dimension([0.5, 1.0])
    with pytest.raises(ParameterError):
        moran_dimension([])


def test_open_set(system):
    rep = verify_open_set(system)
    assert rep.passed, rep
    with pytest.raises(ParameterError):
        verify_open_set(system, n_samples=100)


def test_open_set_negative_control():
    sys_ = quadrant_system(KOCH)
    S2 = sys_.maps[1]
    bad = sys_.with_map(1, S2.scaled_about(sys_.points["H"], 1.5))
    rep = verify_open_set(bad)
    assert not rep.passed
    assert rep.escaped[1] > 0


def test_self_similarity_pass_and_control():
    for a in (0.5, KOCH):
        sys_ = quadrant_system(a)
        s = run_to(a, 14)
        assert verify_self_similarity(sys_, s).passed
        S1 = sys_.maps[0]
        bad = sys_.with_map(0, S1.scaled_about(sys_.points["C"], 0.9))
        assert not verify_self_similarity(bad, s).passed


def test_self_similarity_needs_even_deep_state():
    sys_ = quadrant_system(0.5)
    with pytest.raises(ParameterError):
        verify_self_similarity(sys_, run_to(0.5, 7))
    with pytest.raises(ParameterError):
        verify_self_similarity(sys_, run_to(0.5, 9))


def test_attractor_matches_quadrant_contacts():
    a = 0.5
    sys_ = quadrant_system(a)
    prev = None
    for depth in (4, 6, 8):
        cloud = attractor(sys_, depth)
        assert len(cloud.points) <= 2 * 3**depth
        q = quadrant_contacts(run_to(a, 2 + 2 * depth))
        d = cloud_distance(cloud.points, q)
        assert d <= convergence_bound(a, depth)
        if prev is not None:
            assert d < prev
        prev = d


def test_attractor_deterministic_and_sorted():
    sys_ = quadrant_system(0.6)
    c1, c2 = attractor(sys_, 6), attractor(sys_, 6)
    np.testing.assert_array_equal(c1.points, c2.points)
    order = np.lexsort((c1.points[:, 1], c1.points[:, 0]))
    np.testing.assert_array_equal(order, np.arange(len(order)))
    with pytest.raises(ResourceError):
        attractor(sys_, 15)
    with pytest.raises(ParameterError):
        attractor(sys_, 0)


def test_quadrant_contacts_count():
    s = run_to(0.5, 10)
    assert len(quadrant_contacts(s)) == 2**8 + 1
    assert max_polygon_diameter(s) > 0


def test_attractor_inside_triangle_and_contracting():
    sys_ = quadrant_system(KOCH)
    band = shapely.Polygon(sys_.triangle()).buffer(1e-9)
    assert len(attractor(sys_, 1).points) <= 6
    gaps = []
    for depth in range(1, 8):
        pts = attractor(sys_, depth).points
        assert shapely.contains_xy(band, pts[:, 0], pts[:, 1]).all()
        gaps.append(cloud_distance(pts, attractor(sys_, depth + 1).points))
    assert all(g2 < g1 for g1, g2 in zip(gaps, gaps[1:]))
