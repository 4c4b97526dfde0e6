"""The tropical curve dual to a smooth subdivision.

Leaves are stored with their INWARD primitive vector (pointing toward the
vertex they hang from).  Bounded edges are oriented from the vertex of the
lower-indexed face to the other one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .errors import NotSmooth
from .lattice import FundamentalDomain
from .newton import Subdivision, classify_genericity

LEAF_GROUP = {"left": "L1", "bottom": "L2", "right": "L3", "top": "L4"}
LEAF_INWARD = {"L1": (1, 0), "L2": (0, 1), "L3": (-1, 0), "L4": (0, -1)}


def rot_ccw(v):
    return (-v[1], v[0])


def rot_cw(v):
    return (v[1], -v[0])


def primitive(vec) -> tuple[tuple[int, int], Fraction]:
    """Split a nonzero rational vector into (primitive integer vector, positive length)."""
    a, b = Fraction(vec[0]), Fraction(vec[1])
    den = a.denominator * b.denominator // gcd(a.denominator, b.denominator)
    ia, ib = int(a * den), int(b * den)
    g = gcd(abs(ia), abs(ib))
    if g == 0:
        raise ValueError("zero vector has no direction")
    eta = (ia // g, ib // g)
    length = Fraction(g, den)
    return eta, length


@dataclass
class CurveVertex:
    position: tuple
    face: int


@dataclass
class BoundedEdge:
    v_from: int
    v_to: int
    eta: tuple
    length: Fraction
    dual: int  # subdivision edge index


@dataclass
class Leaf:
    vertex: int
    eta_in: tuple
    group: str
    coord: Fraction
    dual: int


@dataclass(frozen=True)
class Incidence:
    """An edge or leaf seen from one of its vertices, with the outward vector."""

    kind: str  # 'edge' or 'leaf'
    index: int
    sign: int  # +1 if outward equals the stored vector, -1 otherwise
    eta_out: tuple
    dual: int


@dataclass
class TropicalCurve:
    sub: Subdivision
    vertices: list
    bounded_edges: list
    leaves: list
    incidence: list = field(default_factory=list)  # vertex -> [Incidence]
    components: dict = field(default_factory=dict)  # mu -> walk

    @property
    def k(self):
        return self.sub.k

    @property
    def ell(self):
        return self.sub.ell

    def dual_of_subedge(self, sidx: int):
        """('edge', i) or ('leaf', i) for a subdivision edge index."""
        return self._dual_map[sidx]

    def leaf_lines(self) -> dict:
        out = {g: [] for g in ("L1", "L2", "L3", "L4")}
        for lf in self.leaves:
            out[lf.group].append(lf.coord)
        return {g: sorted(v) for g, v in out.items()}

    def walk_vertices(self, mu) -> list:
        return list(self.components[tuple(mu)]["vertices"])

    def component_edges(self, mu) -> list:
        return list(self.components[tuple(mu)]["walk"])


def _vertex_position(face, estar):
    a, b, c = face.vertices[:3]
    # (mu_a - mu_b).p = E*_b - E*_a ; (mu_a - mu_c).p = E*_c - E*_a
    r1 = (a[0] - b[0], a[1] - b[1], estar[b] - estar[a])
    r2 = (a[0] - c[0], a[1] - c[1], estar[c] - estar[a])
    det = r1[0] * r2[1] - r1[1] * r2[0]
    x = Fraction(r1[2] * r2[1] - r1[1] * r2[2], det)
    y = Fraction(r1[0] * r2[2] - r1[2] * r2[0], det)
    return (x, y)


def _angle(v) -> float:
    t = math.atan2(v[1], v[0])
    return t if t >= 0 else t + 2 * math.pi


def build_curve(sub: Subdivision, table=None) -> TropicalCurve:
    rep = classify_genericity(sub)
    if not rep.smooth:
        raise NotSmooth(f"subdivision is not a unit triangulation: {rep.reasons[:3]}")
    estar = sub.estar
    verts = [CurveVertex(_vertex_position(f, estar), t) for t, f in enumerate(sub.faces)]
    edges, leaves = [], []
    dual_map = {}
    for sidx, se in enumerate(sub.edges):
        if len(se.faces) == 2:
            f1, f2 = sorted(se.faces)
            p, q = verts[f1].position, verts[f2].position
            eta, length = primitive((q[0] - p[0], q[1] - p[1]))
            d = (se.b[0] - se.a[0], se.b[1] - se.a[1])
            assert eta[0] * d[0] + eta[1] * d[1] == 0, "edge not orthogonal to its dual"
            dual_map[sidx] = ("edge", len(edges))
            edges.append(BoundedEdge(f1, f2, eta, length, sidx))
        else:
            group = LEAF_GROUP[se.side]
            v = se.faces[0]
            pos = verts[v].position
            coord = pos[1] if group in ("L1", "L3") else pos[0]
            dual_map[sidx] = ("leaf", len(leaves))
            leaves.append(Leaf(v, LEAF_INWARD[group], group, coord, sidx))

    incidence = [[] for _ in verts]
    for t, e in enumerate(edges):
        incidence[e.v_from].append(Incidence("edge", t, 1, e.eta, e.dual))
        incidence[e.v_to].append(Incidence("edge", t, -1, (-e.eta[0], -e.eta[1]), e.dual))
    for t, lf in enumerate(leaves):
        incidence[lf.vertex].append(Incidence("leaf", t, -1, (-lf.eta_in[0], -lf.eta_in[1]), lf.dual))
    for inc in incidence:
        inc.sort(key=lambda s: _angle(s.eta_out))

    curve = TropicalCurve(sub, verts, edges, leaves, incidence)
    curve._dual_map = dual_map
    for mu in sorted(sub.vertices, key=lambda m: (m[1], m[0])):
        curve.components[mu] = _component(curve, mu)
    return curve


def _component(curve: TropicalCurve, mu) -> dict:
    """Walk the boundary of the complement component of mu.

    Incident subdivision edges are taken counterclockwise around mu; this
    walks the component boundary with the component on the left.  Boundary
    points start right after the exterior gap of the rectangle.
    """
    sub = curve.sub
    sedges = sub.edges_at(mu)
    dirs = []
    for s in sedges:
        se = sub.edges[s]
        other = se.b if se.a == mu else se.a
        dirs.append((_angle((other[0] - mu[0], other[1] - mu[1])), s))
    dirs.sort()
    closed = all(len(sub.edges[s].faces) == 2 for _, s in dirs)
    if not closed:
        gaps = []
        for t in range(len(dirs)):
            nxt = dirs[(t + 1) % len(dirs)][0]
            gap = (nxt - dirs[t][0]) % (2 * math.pi)
            gaps.append(gap)
        start = (max(range(len(gaps)), key=lambda t: gaps[t]) + 1) % len(dirs)
        dirs = dirs[start:] + dirs[:start]
    order = [s for _, s in dirs]
    n = len(order)
    # face shared by consecutive incident edges = curve vertex between them
    pairs = range(n) if closed else range(n - 1)
    between = {}
    for t in pairs:
        a, b = order[t], order[(t + 1) % n]
        between[t] = (set(sub.edges[a].faces) & set(sub.edges[b].faces)).pop()

    walk = []
    for t, s in enumerate(order):
        kind, idx = curve.dual_of_subedge(s)
        if kind == "leaf":
            walk.append(("leaf", idx, 0))
            continue
        e = curve.bounded_edges[idx]
        target = between[t]
        walk.append(("edge", idx, 1 if e.v_to == target else -1))
    if closed:
        vertices = [between[(t - 1) % n] for t in range(n)]
    else:
        vertices = [between[t] for t in range(n - 1)]
    return {"walk": walk, "vertices": vertices, "bounded": closed}


def component_boundary(curve: TropicalCurve, mu) -> list:
    """Ordered walk of ('leaf', i, 0) / ('edge', i, +-1) items; component on the left."""
    return list(curve.components[tuple(mu)]["walk"])


def leaf_lines_from_weights(domain: FundamentalDomain) -> dict:
    k, ell = domain.k, domain.ell
    lw = domain.logw
    L2 = [sum((lw[(i, j, "S")] - lw[(i, j, "W")] for j in range(k)), Fraction(0)) for i in range(ell)]
    # the top and right families carry the North weights too; they drop out
    # only in the gauge where every North log-weight is zero
    L4 = [sum((lw[(i, j, "E")] - lw[(i, j, "N")] for j in range(k)), Fraction(0)) for i in range(ell)]
    L1 = [sum((lw[(i, j, "S")] - lw[(i, j, "E")] for i in range(ell)), Fraction(0)) for j in range(k)]
    L3 = [sum((lw[(i, j, "W")] - lw[(i, j, "N")] for i in range(ell)), Fraction(0)) for j in range(k)]
    return {"L1": sorted(L1), "L2": sorted(L2), "L3": sorted(L3), "L4": sorted(L4)}

