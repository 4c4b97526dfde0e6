"""Torus dimer covers, the tropical surface tension, maximizer graphs and
the multiweb edge-coloring construction."""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

import numpy as np

from .errors import (
    HeightInconsistency,
    NotAPerfectMatching,
    SizeGuardExceeded,
    SlopeSumMismatch,
    UnreachedSlope,
)
from .lattice import BLACK_OFFSET, TorusGraph, check_perfect_matching, format_rational, slope_and_energy

MAX_CELLS = 16


@dataclass(frozen=True)
class DimerCover:
    """A perfect matching of the torus graph; edges[w] is the edge id at white w."""

    edges: tuple
    mu: tuple
    energy: Fraction

    @property
    def edge_set(self) -> frozenset:
        return frozenset(self.edges)


def make_cover(edge_ids, graph: TorusGraph) -> DimerCover:
    ids = list(edge_ids)
    check_perfect_matching(ids, graph)
    by_white = sorted(ids, key=lambda e: graph.edges[e].white)
    mu, energy = slope_and_energy(by_white, graph)
    return DimerCover(tuple(by_white), mu, energy)


def _matchings(graph: TorusGraph, allowed=None) -> Iterator[tuple]:
    """Depth-first extension over whites in index order, edge types in W,S,E,N order."""
    n = graph.n_vertices
    used = [False] * n
    chosen = [0] * n
    wedges = [
        [e for e in graph.white_edges[w] if allowed is None or e in allowed] for w in range(n)
    ]
    blk = [e.black for e in graph.edges]

    def rec(w):
        if w == n:
            yield tuple(chosen)
            return
        for e in wedges[w]:
            b = blk[e]
            if not used[b]:
                used[b] = True
                chosen[w] = e
                yield from rec(w + 1)
                used[b] = False

    yield from rec(0)


def enumerate_covers(graph: TorusGraph, max_cells: int = MAX_CELLS) -> list[DimerCover]:
    if graph.n_vertices > max_cells:
        raise SizeGuardExceeded(f"k*ell = {graph.n_vertices} exceeds enumeration guard {max_cells}")
    out = []
    for m in _matchings(graph):
        mu1 = -sum(graph.edges[e].cross_u for e in m)
        mu2 = sum(graph.edges[e].cross_v for e in m)
        energy = sum((graph.edges[e].logw for e in m), Fraction(0))
        out.append(DimerCover(m, (mu1, mu2), energy))
    return out


def newton_points(k: int, ell: int) -> list[tuple[int, int]]:
    return [(m1, m2) for m2 in range(0, k + 1) for m1 in range(-ell, 1)]


@dataclass
class TensionEntry:
    estar: Fraction
    maximizers: list
    count_covers: int


@dataclass
class SurfaceTensionTable:
    graph: TorusGraph
    entries: dict

    @property
    def k(self):
        return self.graph.k

    @property
    def ell(self):
        return self.graph.ell

    def estar(self, mu) -> Fraction:
        return self.entries[tuple(mu)].estar

    def estar_map(self) -> dict:
        return {mu: e.estar for mu, e in self.entries.items()}

    def to_json(self) -> list:
        return [
            {
                "mu": list(mu),
                "estar": format_rational(e.estar),
                "n_max": len(e.maximizers),
                "n_covers": e.count_covers,
            }
            for mu, e in sorted(self.entries.items(), key=lambda kv: (kv[0][1], kv[0][0]))
        ]


def surface_tension_table(graph: TorusGraph, covers=None) -> SurfaceTensionTable:
    if covers is None:
        covers = enumerate_covers(graph)
    by_mu = defaultdict(list)
    for c in covers:
        by_mu[c.mu].append(c)
    entries = {}
    for mu in newton_points(graph.k, graph.ell):
        group = by_mu.get(mu)
        if not group:
            raise UnreachedSlope(f"no cover has slope {mu}")
        best = max(c.energy for c in group)
        entries[mu] = TensionEntry(best, [c for c in group if c.energy == best], len(group))
    stray = set(by_mu) - set(entries)
    if stray:
        raise UnreachedSlope(f"slopes outside the rectangle: {sorted(stray)}")
    return SurfaceTensionTable(graph, entries)


class CoverIndex:
    """Incidence matrix of all covers of a torus graph, for fast re-weighting.

    The combinatorics depend only on (k, ell), so randomized weight draws can
    reuse one enumeration.
    """

    def __init__(self, graph: TorusGraph, covers=None):
        covers = enumerate_covers(graph) if covers is None else covers
        self.graph = graph
        self.covers = covers
        self.incidence = np.zeros((len(covers), len(graph.edges)), dtype=np.int64)
        for r, c in enumerate(covers):
            self.incidence[r, list(c.edges)] = 1
        self.points = newton_points(graph.k, graph.ell)
        index = {mu: t for t, mu in enumerate(self.points)}
        self.slope_id = np.array([index[c.mu] for c in covers], dtype=np.int64)

    def estar_integer(self, weights) -> dict:
        """E* for integer log-weights given in edge-id order (exact, int64)."""
        w = np.asarray(weights, dtype=np.int64)
        energies = self.incidence @ w
        best = np.full(len(self.points), np.iinfo(np.int64).min, dtype=np.int64)
        np.maximum.at(best, self.slope_id, energies)
        return {mu: Fraction(int(best[t])) for t, mu in enumerate(self.points)}


@dataclass
class LiftComponent:
    """A connected component of the lifted maximizer graph, described on the torus.

    vertices: list of (color, torus index, (m, n)) with color 'w' or 'b'; the
    offsets give one consistent lift when the component is bounded.
    edges: list of (edge id, (m, n) copy of its white vertex).
    """

    vertices: list
    edges: list
    bounded: bool


@dataclass
class MaximizerGraph:
    mu: tuple
    edges: frozenset
    components: list = field(default_factory=list)

    @property
    def all_bounded(self) -> bool:
        return all(c.bounded for c in self.components)


def lift_components(graph: TorusGraph, edge_ids) -> list[LiftComponent]:
    """Components of the lift of an edge subset, via BFS with homology tracking."""
    edge_ids = sorted(edge_ids)
    adj = defaultdict(list)  # ('w', idx) -> [(edge, neighbour, offset delta)]
    for e in edge_ids:
        ed = graph.edges[e]
        d = (ed.cross_v, ed.cross_u)  # black copy = white copy + d
        adj[("w", ed.white)].append((e, ("b", ed.black), d))
        adj[("b", ed.black)].append((e, ("w", ed.white), (-d[0], -d[1])))
    seen = {}
    comps = []
    order = [("w", w) for w in range(graph.n_vertices)] + [("b", b) for b in range(graph.n_vertices)]
    for start in order:
        if start in seen or start not in adj:
            continue
        seen[start] = (0, 0)
        queue = deque([start])
        verts, cedges, bounded = [], set(), True
        while queue:
            v = queue.popleft()
            verts.append((v[0], v[1], seen[v]))
            for e, u, d in adj[v]:
                off = (seen[v][0] + d[0], seen[v][1] + d[1])
                if u not in seen:
                    seen[u] = off
                    queue.append(u)
                elif seen[u] != off:
                    bounded = False
                wcopy = seen[v] if v[0] == "w" else off
                cedges.add((e, wcopy))
        comps.append(LiftComponent(sorted(verts), sorted(cedges), bounded))
    return comps


def maximizer_graph(table: SurfaceTensionTable, mu) -> MaximizerGraph:
    mu = tuple(mu)
    entry = table.entries[mu]
    edges = frozenset(e for c in entry.maximizers for e in c.edges)
    return MaximizerGraph(mu, edges, lift_components(table.graph, edges))


def is_strictly_concave(table: SurfaceTensionTable, subdivision, mu) -> bool:
    return tuple(mu) in subdivision.vertices


# ---------------------------------------------------------------- multiwebs
#
# Doubled coordinates: b_{x,y} at (2x, 2y), w_{x,y} at (2x+1, 2y+1); faces of
# the lattice sit at (odd, even) and (even, odd) points.


def _face_id(p: int, q: int, k: int, ell: int) -> int:
    if p % 2 == 1:
        i, j, kind = ((p - 1) // 2) % ell, (q // 2) % k, 0
    else:
        i, j, kind = (p // 2) % ell, ((q - 1) // 2) % k, 1
    return 2 * (i * k + j) + kind


def edge_faces(graph: TorusGraph, eid: int) -> tuple[int, int]:
    """(f', f): crossing from f' to f has the black endpoint on the left."""
    e = graph.edges[eid]
    k, ell = graph.k, graph.ell
    wx, wy = 2 * e.i + 1, 2 * e.j + 1
    dx, dy = BLACK_OFFSET[e.type]
    bx, by = 2 * dx - 1, 2 * dy - 1
    fa = (wx, wy + by)
    fb = (wx + bx, wy)
    # d = fb - fa = (bx, -by); black is left of d iff bx*by > 0
    if bx * by > 0:
        return _face_id(*fa, k, ell), _face_id(*fb, k, ell)
    return _face_id(*fb, k, ell), _face_id(*fa, k, ell)


def color_multiweb(covers: list, graph: TorusGraph) -> list[DimerCover]:
    """Split the multiset union of d covers into d covers of the average slope."""
    d = len(covers)
    if d == 0:
        raise SlopeSumMismatch("need at least one cover")
    s1 = sum(c.mu[0] for c in covers)
    s2 = sum(c.mu[1] for c in covers)
    if s1 % d or s2 % d:
        raise SlopeSumMismatch(f"slope sum ({s1},{s2}) is not divisible by d={d}")
    target = (s1 // d, s2 // d)

    mult = defaultdict(int)
    for c in covers:
        if len(c.edges) != graph.n_vertices:
            raise NotAPerfectMatching("input is not a cover")
        for e in c.edges:
            mult[e] += 1

    k, ell = graph.k, graph.ell
    nf = 2 * k * ell
    rel = defaultdict(list)  # face -> [(other face, increment)]
    for eid in range(len(graph.edges)):
        fp, f = edge_faces(graph, eid)
        n = mult.get(eid, 0)
        rel[fp].append((f, n))
        rel[f].append((fp, -n))
    f0 = _face_id(2 * (ell - 1) + 1, 0, k, ell)
    h = {f0: 0}
    queue = deque([f0])
    while queue:
        f = queue.popleft()
        for g, n in rel[f]:
            val = (h[f] + n) % d
            if g not in h:
                h[g] = val
                queue.append(g)
            elif h[g] != val:
                raise HeightInconsistency(f"height mod {d} is not well defined at face {g}")
    if len(h) != nf:
        raise HeightInconsistency("face graph is disconnected")

    buckets = [[] for _ in range(d)]
    for eid in sorted(mult):
        fp, _ = edge_faces(graph, eid)
        for t in range(1, mult[eid] + 1):
            buckets[(h[fp] + t) % d].append(eid)
    out = [make_cover(b, graph) for b in buckets]
    for c in out:
        if c.mu != target:
            raise HeightInconsistency(f"colored cover has slope {c.mu}, expected {target}")
    return out
