from fractions import Fraction

import pytest

from tropaz.covers import maximizer_graph
from tropaz.errors import EdgeNotInMaximizerGraph
from tropaz.gibbs0 import (
    EdgeRef,
    char_poly_mu,
    components,
    edge_probabilities,
    gibbs_zero_measure,
    inverse_coefficient,
    laurent_kasteleyn,
    oracle_component_measure,
    perm_sign,
)
from tropaz.invariants import _vertex_sums

from conftest import pipeline

SMOOTH = ["ex1", "ex1_swapped", "generic22", "twomax22", "degenerate22"]


def measure(p, mu):
    return gibbs_zero_measure(p.graph, maximizer_graph(p.table, mu))


def test_perm_sign():
    assert perm_sign([0, 1, 2]) == 1
    assert perm_sign([1, 0, 2]) == -1
    assert perm_sign([1, 2, 0]) == 1


def test_ex1_matrices(ex1):
    K = laurent_kasteleyn(ex1.graph, maximizer_graph(ex1.table, (-1, 0)).edges)
    assert K[0, 0].terms == {(-1, 0): 1}
    K = laurent_kasteleyn(ex1.graph, maximizer_graph(ex1.table, (0, 1)).edges)
    assert K[0, 0].terms == {(0, 1): -1}


def test_ex1_char_poly(ex1):
    det, tau, Z = char_poly_mu(ex1.graph, maximizer_graph(ex1.table, (-1, 0)).edges)
    assert (det.terms, tau, Z) == ({(-1, 0): 1}, 1, 1)
    det, tau, Z = char_poly_mu(ex1.graph, maximizer_graph(ex1.table, (0, 1)).edges)
    assert (det.terms, tau, Z) == ({(0, 1): -1}, -1, 1)


def test_twomax_char_poly(twomax):
    m = measure(twomax, (-1, 1))
    assert m.Z == 2
    assert m.det.is_monomial()


def test_ex1_inverse_coefficients(ex1):
    m = measure(ex1, (-1, 0))
    assert inverse_coefficient(m, (0, (0, 1)), (0, (0, 0))) == 1
    assert inverse_coefficient(m, (0, (0, 0)), (0, (0, 0))) == 0
    m = measure(ex1, (0, 1))
    assert inverse_coefficient(m, (0, (1, 0)), (0, (0, 0))) == -1


def test_ex1_marginals(ex1):
    m = measure(ex1, (-1, 0))
    assert edge_probabilities(m, [EdgeRef(0, 0, "S", 0, 0)]) == 1
    assert edge_probabilities(m, [EdgeRef(0, 0, "S", 5, -3)]) == 1
    with pytest.raises(EdgeNotInMaximizerGraph):
        edge_probabilities(m, [EdgeRef(0, 0, "N", 0, 0)])


def test_swappable_edge_is_half(twomax):
    m = measure(twomax, (-1, 1))
    assert edge_probabilities(m, [EdgeRef(1, 0, "S", 0, 0)]) == Fraction(1, 2)
    assert edge_probabilities(m, [EdgeRef(0, 0, "W", 0, 0)]) == 1


def test_joint_marginal(twomax):
    # the two swappable edges at one white vertex exclude each other
    m = measure(twomax, (-1, 1))
    pair = [EdgeRef(1, 0, "S", 0, 0), EdgeRef(1, 1, "W", 0, 0)]
    assert edge_probabilities(m, pair) == 0


@pytest.mark.parametrize("name", SMOOTH)
def test_vertex_sums_and_oracle(name):
    p = pipeline(name)
    for mu in p.sub.vertices:
        m = measure(p, mu)
        assert m.det.is_monomial()
        assert _vertex_sums(p.graph, m) == []
        for comp in components(m):
            assert comp.bounded
            for ref, val in oracle_component_measure(p.graph, comp).items():
                assert edge_probabilities(m, [ref]) == val


def test_single_edge_component(ex1):
    (comp,) = components(measure(ex1, (-1, 0)))
    assert list(oracle_component_measure(ex1.graph, comp).values()) == [1]


def test_monomial_exponent_is_slope(g22):
    for mu in g22.sub.vertices:
        (key,) = measure(g22, mu).det.terms
        assert key == mu
