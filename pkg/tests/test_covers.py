import itertools
from collections import Counter
from fractions import Fraction

import pytest

from tropaz.covers import (
    color_multiweb,
    enumerate_covers,
    is_strictly_concave,
    make_cover,
    maximizer_graph,
    newton_points,
    surface_tension_table,
)
from tropaz.errors import SlopeSumMismatch
from tropaz.lattice import build_torus_graph, domain_from_values
from tropaz.newton import build_subdivision


def permanent(graph) -> int:
    """Independent oracle: permanent of the white x black edge multiplicity matrix."""
    n = graph.n_vertices
    A = [[0] * n for _ in range(n)]
    for e in graph.edges:
        A[e.white][e.black] += 1
    total = 0
    for perm in itertools.permutations(range(n)):
        prod = 1
        for w in range(n):
            prod *= A[w][perm[w]]
        total += prod
    return total


def test_ex1_four_covers(ex1):
    covers = enumerate_covers(ex1.graph)
    types = sorted(ex1.graph.edges[c.edges[0]].type for c in covers)
    assert types == ["E", "N", "S", "W"]


def test_cover_count_is_permanent(g22):
    assert len(enumerate_covers(g22.graph)) == permanent(g22.graph)
    g12 = build_torus_graph(domain_from_values(1, 2, range(8)))
    assert len(enumerate_covers(g12)) == permanent(g12)


def test_covers_are_distinct_matchings(g22):
    covers = enumerate_covers(g22.graph)
    assert len({c.edge_set for c in covers}) == len(covers)
    for c in covers:
        assert make_cover(c.edges, g22.graph) == c


def test_ex1_table(ex1):
    t = ex1.table
    assert t.estar_map() == {(0, 0): 0, (-1, 0): 1, (-1, 1): 0, (0, 1): 0}
    assert all(len(t.entries[mu].maximizers) == 1 for mu in t.entries)


def test_table_reaches_every_slope(g22):
    assert set(g22.table.estar_map()) == set(newton_points(2, 2))


def test_ex1_maximizer_graph(ex1):
    mg = maximizer_graph(ex1.table, (-1, 0))
    assert [ex1.graph.edges[e].type for e in mg.edges] == ["S"]
    assert mg.all_bounded
    assert len(mg.components) == 1


def test_two_maximizer_construction(g22):
    """logw = 0 on the union of two slope-mu covers and -1 elsewhere."""
    g = g22.graph
    mu = (-1, 1)
    same = [c for c in enumerate_covers(g) if c.mu == mu]
    built = 0
    for a, b in itertools.combinations(same, 2):
        union = a.edge_set | b.edge_set
        vals = [0 if e.id in union else -1 for e in g.edges]
        graph = build_torus_graph(domain_from_values(2, 2, vals))
        table = surface_tension_table(graph)
        sub = build_subdivision(table)
        mg = maximizer_graph(table, mu)
        assert mg.edges == union
        if is_strictly_concave(table, sub, mu):
            assert mg.all_bounded
            built += 1
    assert built > 0


def test_twomax_fixture(twomax):
    mg = maximizer_graph(twomax.table, (-1, 1))
    assert len(twomax.table.entries[(-1, 1)].maximizers) == 2
    assert sorted(mg.edges) == [0, 6, 9, 10, 12, 15]
    assert mg.all_bounded


def test_ex1_every_slope_strictly_concave(ex1):
    assert all(is_strictly_concave(ex1.table, ex1.sub, mu) for mu in newton_points(1, 1))


def test_multiweb_mismatch(ex1):
    covers = {ex1.graph.edges[c.edges[0]].type: c for c in enumerate_covers(ex1.graph)}
    with pytest.raises(SlopeSumMismatch):
        color_multiweb([covers["E"], covers["W"]], ex1.graph)


def test_multiweb_generic_pair(g22):
    covers = enumerate_covers(g22.graph)
    d1 = next(c for c in covers if c.mu == (-2, 1))
    d2 = next(c for c in covers if c.mu == (0, 1))
    out = color_multiweb([d1, d2], g22.graph)
    assert [c.mu for c in out] == [(-1, 1), (-1, 1)]
    assert Counter(d1.edges) + Counter(d2.edges) == sum((Counter(c.edges) for c in out), Counter())


def test_multiweb_energy_is_additive(g22):
    covers = enumerate_covers(g22.graph)
    for a, b in itertools.combinations(covers[:12], 2):
        if (a.mu[0] + b.mu[0]) % 2 or (a.mu[1] + b.mu[1]) % 2:
            continue
        out = color_multiweb([a, b], g22.graph)
        assert sum(c.energy for c in out) == a.energy + b.energy
        assert all(isinstance(c.energy, Fraction) for c in out)
