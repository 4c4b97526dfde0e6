"""Zero-temperature Gibbs measures on the lifted maximizer graph.

Because the characteristic polynomial of the maximizer graph is a single
monomial, the contour integral giving the inverse Kasteleyn matrix reduces
to reading off one Laurent coefficient of the adjugate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .covers import MaximizerGraph, _matchings, lift_components
from .errors import EdgeNotInMaximizerGraph, NotMonomial, UnboundedComponent
from .lattice import BLACK_OFFSET, EdgeRef, TorusGraph, normalize_type
from .laurent import LaurentMatrix, LaurentPoly
from .linalg import det_rational


def perm_sign(perm) -> int:
    """Sign of a permutation given as a sequence of images."""
    seen = [False] * len(perm)
    sign = 1
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        x = start
        while not seen[x]:
            seen[x] = True
            x = perm[x]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def edge_monomial(graph: TorusGraph, eid: int) -> LaurentPoly:
    e = graph.edges[eid]
    return LaurentPoly.monomial(e.sigma, -e.cross_u, e.cross_v)


def laurent_kasteleyn(graph: TorusGraph, edges) -> LaurentMatrix:
    K = LaurentMatrix(graph.n_vertices)
    for eid in sorted(edges):
        e = graph.edges[eid]
        K[e.white, e.black] = K[e.white, e.black] + edge_monomial(graph, eid)
    return K


def _signed_term(graph: TorusGraph, matching) -> LaurentPoly:
    perm = [graph.edges[e].black for e in matching]
    coeff = perm_sign(perm)
    a = b = 0
    for e in matching:
        ed = graph.edges[e]
        coeff *= ed.sigma
        a -= ed.cross_u
        b += ed.cross_v
    return LaurentPoly.monomial(coeff, a, b)


def char_poly_mu(graph: TorusGraph, edges) -> tuple[LaurentPoly, int, int]:
    """det of the maximizer-graph Kasteleyn matrix by signed matching expansion."""
    allowed = frozenset(edges)
    det = LaurentPoly()
    for m in _matchings(graph, allowed):
        det = det + _signed_term(graph, m)
    if not det.is_monomial():
        raise NotMonomial(f"determinant {det!r} is not a single monomial")
    (_, _), c = next(iter(det.terms.items()))
    tau = 1 if c > 0 else -1
    return det, tau, int(abs(c))


def _minor_matchings(graph: TorusGraph, allowed, w0: int, b0: int):
    """Matchings of the graph with white w0 and black b0 removed."""
    n = graph.n_vertices
    whites = [w for w in range(n) if w != w0]
    wedges = {w: [e for e in graph.white_edges[w] if e in allowed and graph.edges[e].black != b0] for w in whites}
    used = [False] * n
    used[b0] = True
    chosen = []

    def rec(t):
        if t == len(whites):
            yield tuple(chosen)
            return
        for e in wedges[whites[t]]:
            b = graph.edges[e].black
            if not used[b]:
                used[b] = True
                chosen.append(e)
                yield from rec(t + 1)
                chosen.pop()
                used[b] = False

    yield from rec(0)


def adjugate(graph: TorusGraph, edges) -> dict:
    """adj(K)[(b, w)] = sum over permutations with pi(w) = b of sgn(pi) prod_{w' != w} K(w', pi(w'))."""
    allowed = frozenset(edges)
    n = graph.n_vertices
    adj = {}
    for w0 in range(n):
        for b0 in range(n):
            acc = LaurentPoly()
            for m in _minor_matchings(graph, allowed, w0, b0):
                perm = [0] * n
                perm[w0] = b0
                coeff = 1
                a = b = 0
                for e in m:
                    ed = graph.edges[e]
                    perm[ed.white] = ed.black
                    coeff *= ed.sigma
                    a -= ed.cross_u
                    b += ed.cross_v
                acc = acc + LaurentPoly.monomial(perm_sign(perm) * coeff, a, b)
            adj[(b0, w0)] = acc
    return adj


@dataclass
class GibbsZeroMeasure:
    graph: TorusGraph
    mu: tuple
    edges: frozenset
    det: LaurentPoly
    tau: int
    Z: int
    adj: dict
    K: LaurentMatrix

    def to_json(self) -> dict:
        return {
            "mu": list(self.mu),
            "tau": self.tau,
            "Z": self.Z,
            "det": self.det.to_json(),
            "edges": sorted(self.edges),
        }


def gibbs_zero_measure(graph: TorusGraph, maxgraph: MaximizerGraph) -> GibbsZeroMeasure:
    edges = frozenset(maxgraph.edges)
    det, tau, Z = char_poly_mu(graph, edges)
    (a, b), _ = next(iter(det.terms.items()))
    if (a, b) != tuple(maxgraph.mu):
        raise NotMonomial(f"determinant exponent {(a, b)} differs from slope {maxgraph.mu}")
    return GibbsZeroMeasure(graph, tuple(maxgraph.mu), edges, det, tau, Z, adjugate(graph, edges), laurent_kasteleyn(graph, edges))


# lifted vertices are (torus index, (m, n)); a lifted edge is EdgeRef(i, j, T, m, n)
# where (m, n) is the copy of its white endpoint


def lifted_white(graph: TorusGraph, ref) -> tuple:
    return graph.vertex_index(ref.i, ref.j), (ref.m, ref.n)


def lifted_black(graph: TorusGraph, ref) -> tuple:
    k, ell = graph.k, graph.ell
    dx, dy = BLACK_OFFSET[normalize_type(ref.type)]
    x, y = ell * ref.m + ref.i + dx, k * ref.n + ref.j + dy
    return graph.vertex_index(x % ell, y % k), (x // ell, y // k)


def inverse_coefficient(measure: GibbsZeroMeasure, black, white) -> Fraction:
    """K^{-1}(b~, w~) for lifted vertices given as (torus index, (m, n))."""
    b, (mb, nb) = black
    w, (mw, nw) = white
    poly = measure.adj[(b, w)]
    mu1, mu2 = measure.mu
    # adj / (tau Z z^mu1 w^mu2): coefficient of z^{nb - nw} w^{mw - mb}
    c = poly.coefficient(nb - nw + mu1, mw - mb + mu2)
    return c / (measure.tau * measure.Z)


def _as_ref(e) -> EdgeRef:
    if isinstance(e, EdgeRef):
        return EdgeRef(e.i, e.j, normalize_type(e.type), e.m, e.n)
    i, j, t, *rest = e
    m, n = (rest + [0, 0])[:2]
    return EdgeRef(int(i), int(j), normalize_type(t), int(m), int(n))


def edge_probabilities(measure: GibbsZeroMeasure, edges) -> Fraction:
    refs = [_as_ref(e) for e in edges]
    g = measure.graph
    for r in refs:
        if g.edge_id(r) not in measure.edges:
            raise EdgeNotInMaximizerGraph(f"{tuple(r)} is not in the maximizer graph")
    whites = [lifted_white(g, r) for r in refs]
    blacks = [lifted_black(g, r) for r in refs]
    sig = [g.edge(r).sigma for r in refs]
    p = len(refs)
    M = [[sig[t] * inverse_coefficient(measure, blacks[s], whites[t]) for t in range(p)] for s in range(p)]
    return det_rational(M)


def component_edges_lifted(graph: TorusGraph, comp) -> list[EdgeRef]:
    out = []
    for eid, (m, n) in comp.edges:
        e = graph.edges[eid]
        out.append(EdgeRef(e.i, e.j, e.type, m, n))
    return out


def oracle_component_measure(graph: TorusGraph, comp) -> dict:
    """Uniform measure over the matchings of one finite lifted component."""
    if not comp.bounded:
        raise UnboundedComponent("component of the lifted maximizer graph is infinite")
    refs = component_edges_lifted(graph, comp)
    wv = sorted({lifted_white(graph, r) for r in refs})
    bv = sorted({lifted_black(graph, r) for r in refs})
    if len(wv) != len(bv):
        return {r: Fraction(0) for r in refs}
    windex = {v: t for t, v in enumerate(wv)}
    adj = {t: [] for t in range(len(wv))}
    for r in refs:
        adj[windex[lifted_white(graph, r)]].append(r)
    counts = {r: 0 for r in refs}
    total = 0
    used = set()
    chosen = []

    def rec(t):
        nonlocal total
        if t == len(wv):
            total += 1
            for r in chosen:
                counts[r] += 1
            return
        for r in adj[t]:
            b = lifted_black(graph, r)
            if b not in used:
                used.add(b)
                chosen.append(r)
                rec(t + 1)
                chosen.pop()
                used.discard(b)

    rec(0)
    if total == 0:
        return {r: Fraction(0) for r in refs}
    return {r: Fraction(c, total) for r, c in counts.items()}


def components(measure: GibbsZeroMeasure) -> list:
    return lift_components(measure.graph, measure.edges)
