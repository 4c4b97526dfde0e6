from fractions import Fraction as Fr

import pytest

from tropaz.action import (
    action_slopes,
    classify_point,
    classify_zeros,
    default_path,
    facet_height,
    limit_shape,
    path_height,
    vertex_map,
    verify_geometry,
)
from tropaz.errors import OutsideDomain

from conftest import pipeline

SMOOTH = ["ex1", "ex1_swapped", "generic22", "twomax22", "degenerate22"]
Q = Fr(1, 4)


def test_edge_slope(ex1):
    assert action_slopes(ex1.curve, ex1.primal, -Q, -Q).edge[0] == Fr(1, 2)
    assert action_slopes(ex1.curve, ex1.primal, Fr(-1, 2), Fr(-1, 2)).edge[0] == 0


def test_zero_counts(ex1):
    rep = classify_zeros(action_slopes(ex1.curve, ex1.primal, -Q, -Q), ex1.curve)
    assert rep.Z[(-1, 0)] == 2
    assert {z["kind"] for z in rep.v_zeros} == {"simple"}
    rep = classify_zeros(action_slopes(ex1.curve, ex1.primal, -3 * Q, -3 * Q), ex1.curve)
    assert rep.Z[(0, 1)] == 2


def test_midpoint_double_e_zero(ex1):
    rep = classify_zeros(action_slopes(ex1.curve, ex1.primal, Fr(-1, 2), Fr(-1, 2)), ex1.curve)
    assert rep.n_double == 1
    assert rep.v_zeros == []


def test_phases(ex1):
    c, pr = ex1.curve, ex1.primal
    assert (classify_point(c, pr, -Q, -Q).kind, classify_point(c, pr, -Q, -Q).mu) == ("Frozen", (-1, 0))
    assert classify_point(c, pr, -3 * Q, -3 * Q).mu == (0, 1)
    assert classify_point(c, pr, Fr(-1, 2), Fr(-1, 2)).kind == "ArcticCurve"


def test_vertex_images(ex1):
    assert vertex_map(ex1.curve, ex1.primal) == [(0, -1), (-1, 0)]


def test_triple_zero_at_image(ex1):
    u, v = vertex_map(ex1.curve, ex1.primal)[0]
    rep = classify_zeros(action_slopes(ex1.curve, ex1.primal, u, v), ex1.curve)
    assert 0 in [z["vertex"] for z in rep.v_zeros if z["kind"] == "triple"]


def test_ex1_arctic(ex1):
    (s,) = ex1.arctic.segments
    assert {s["a"], s["b"]} == {(0, -1), (-1, 0)}
    # the segment lies on u + v = -1
    assert all(p[0] + p[1] == -1 for p in (s["a"], s["b"]))


def test_degenerate_component_collapses():
    p = pipeline("degenerate22")
    mu = (-1, 1)
    assert len(p.curve.component_edges(mu)) == 3
    images = vertex_map(p.curve, p.primal)
    assert len({images[v] for v in p.curve.walk_vertices(mu)}) == 1
    assert p.arctic.regions[mu]["empty"]


def test_limit_shape_values(ex1):
    c, d, pr = ex1.curve, ex1.dual, ex1.primal
    assert limit_shape(c, d, pr, -Q, -Q) == Fr(1, 2)
    assert limit_shape(c, d, pr, -3 * Q, -3 * Q) == 1
    for t in [Fr(0), Fr(1, 3), Fr(1, 2), Fr(1)]:
        u, v = -t, t - 1
        assert facet_height(d, 1, 1, (-1, 0), u, v) == facet_height(d, 1, 1, (0, 1), u, v) == 1


def test_limit_shape_formula(ex1):
    c, d, pr = ex1.curve, ex1.dual, ex1.primal
    for u, v in [(-Fr(1, 10), -Fr(3, 10)), (-Fr(2, 7), -Fr(1, 7))]:
        assert limit_shape(c, d, pr, u, v) == -u - v
    for u, v in [(-Fr(9, 10), -Fr(3, 10)), (-Fr(5, 7), -Fr(6, 7))]:
        assert limit_shape(c, d, pr, u, v) == 1


def test_outside_domain(ex1):
    with pytest.raises(OutsideDomain):
        limit_shape(ex1.curve, ex1.dual, ex1.primal, Fr(1, 2), Fr(-1, 2))


@pytest.mark.parametrize("name", SMOOTH)
def test_facet_and_path_agree(name):
    p = pipeline(name)
    for mu in p.sub.vertices:
        path = default_path(p.curve, mu)
        for u, v in [(-Fr(1, 3 * p.ell), -Fr(2, 5 * p.k)), (-Fr(7, 9 * p.ell), -Fr(1, 11 * p.k))]:
            assert facet_height(p.dual, p.k, p.ell, mu, u, v) == path_height(p.curve, p.primal, u, v, path)


@pytest.mark.parametrize("name", SMOOTH)
def test_geometry(name):
    p = pipeline(name)
    assert verify_geometry(p.arctic, p.curve, p.primal).ok


def test_n1_counts_by_class(g22):
    rep = verify_geometry(g22.arctic, g22.curve, g22.primal)
    want = {"F": 2, "Q": 3, "S": 4}
    for mu, count in rep.counts.items():
        cls = "F" if mu[0] in (0, -2) and mu[1] in (0, 2) else "Q" if mu[0] in (0, -2) or mu[1] in (0, 2) else "S"
        assert count == want[cls]
    assert rep.count_violations == []
