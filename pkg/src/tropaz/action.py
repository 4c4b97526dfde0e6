"""Tropical action slopes, zero bookkeeping, phases, the vertex map Psi,
the tropical arctic curve and the tropical limit shape.

The action 1-form at (u, v) is

    dF(eta) = k(1 + ell u) eta_2 - ell(1 + k v) eta_1 - df(eta)

where df is the exact 1-form coming from the Kirchhoff solution.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ImageOutsideDomain, OutsideDomain
from .kirchhoff import DualActionFunction, PrimalGradients
from .newton import NewtonPolygon, polygon_area2
from .tropical_curve import TropicalCurve, rot_ccw


def _sign(x) -> int:
    return (x > 0) - (x < 0)


@dataclass
class ActionSlopes:
    point: tuple
    edge: dict  # bounded edge -> dF along its stored eta
    leaf: dict  # leaf -> dF along the inward eta

    def outward(self, inc) -> Fraction:
        table = self.edge if inc.kind == "edge" else self.leaf
        return inc.sign * table[inc.index]


def action_slopes(curve: TropicalCurve, primal: PrimalGradients, u, v) -> ActionSlopes:
    u, v = Fraction(u), Fraction(v)
    k, ell = curve.k, curve.ell
    a = k * (1 + ell * u)
    b = ell * (1 + k * v)
    df = primal.oneform
    edge = {t: a * e.eta[1] - b * e.eta[0] - df.edge[t] for t, e in enumerate(curve.bounded_edges)}
    leaf = {t: a * lf.eta_in[1] - b * lf.eta_in[0] - df.leaf[t] for t, lf in enumerate(curve.leaves)}
    return ActionSlopes((u, v), edge, leaf)


def _incidence_by_dual(curve: TropicalCurve, vertex: int) -> dict:
    return {inc.dual: inc for inc in curve.incidence[vertex]}


def component_incidences(curve: TropicalCurve, vertex: int, mu) -> tuple:
    """The two incidences at `vertex` that bound the component of mu."""
    sub = curve.sub
    face = sub.faces[curve.vertices[vertex].face]
    mu = tuple(mu)
    others = [m for m in face.vertices if m != mu]
    by_dual = _incidence_by_dual(curve, vertex)
    return tuple(by_dual[sub.edge_between(mu, m)] for m in others)


@dataclass
class ZeroReport:
    v_zeros: list  # {"vertex", "mu", "kind"}
    e_zeros: list  # {"edge", "kind"}
    Z: dict

    @property
    def triple(self) -> list:
        return sorted({z["vertex"] for z in self.v_zeros if z["kind"] == "triple"})

    @property
    def n_double(self) -> int:
        return sum(1 for z in self.e_zeros if z["kind"] == "double")

    def to_json(self) -> dict:
        return {
            "v_zeros": [{**z, "mu": list(z["mu"])} for z in self.v_zeros],
            "e_zeros": self.e_zeros,
            "Z": [{"mu": list(m), "Z": c} for m, c in sorted(self.Z.items(), key=lambda kv: (kv[0][1], kv[0][0]))],
        }


def classify_zeros(slopes: ActionSlopes, curve: TropicalCurve) -> ZeroReport:
    sub = curve.sub
    Z = {mu: 0 for mu in sub.vertices}
    v_zeros = []
    for vx in range(len(curve.vertices)):
        face = sub.faces[curve.vertices[vx].face]
        for mu in face.vertices:
            a, b = component_incidences(curve, vx, mu)
            sa, sb = _sign(slopes.outward(a)), _sign(slopes.outward(b))
            if sa == sb == 0:
                v_zeros.append({"vertex": vx, "mu": mu, "kind": "triple"})
            elif sa == sb:
                v_zeros.append({"vertex": vx, "mu": mu, "kind": "simple"})
                Z[mu] += 1
    e_zeros = []
    for t, e in enumerate(curve.bounded_edges):
        if slopes.edge[t] != 0:
            continue
        ends = (e.v_from, e.v_to)
        adjacent = [inc for vx in ends for inc in curve.incidence[vx] if inc.dual != e.dual]
        if any(slopes.outward(inc) == 0 for inc in adjacent):
            continue
        se = sub.edges[e.dual]
        mu = se.a  # either component containing e gives the same answer
        signs = []
        for vx in ends:
            for inc in component_incidences(curve, vx, mu):
                if inc.dual != e.dual:
                    signs.append(_sign(slopes.outward(inc)))
        kind = "simple" if signs[0] == signs[1] else "double"
        e_zeros.append({"edge": t, "kind": kind})
        if kind == "simple":
            Z[se.a] += 1
            Z[se.b] += 1
    return ZeroReport(v_zeros, e_zeros, Z)


@dataclass(frozen=True)
class Phase:
    kind: str  # 'Frozen', 'Smooth' or 'ArcticCurve'
    mu: tuple | None = None

    def to_json(self) -> dict:
        return {"kind": self.kind, "mu": list(self.mu) if self.mu is not None else None}


def in_domain(curve: TropicalCurve, u, v, closed: bool = False) -> bool:
    lo_u, lo_v = Fraction(-1, curve.ell), Fraction(-1, curve.k)
    if closed:
        return lo_u <= u <= 0 and lo_v <= v <= 0
    return lo_u < u < 0 and lo_v < v < 0


def phase_from_zeros(rep: ZeroReport, curve: TropicalCurve) -> Phase:
    if rep.triple or rep.n_double:
        return Phase("ArcticCurve")
    poly = NewtonPolygon(curve.k, curve.ell)
    want = {"F": 2, "Q": 3, "S": 4}
    for mu in sorted(rep.Z, key=lambda m: (m[1], m[0])):
        cls = poly.classify(mu)
        if rep.Z[mu] == want[cls]:
            return Phase("Smooth" if cls == "S" else "Frozen", mu)
    return Phase("ArcticCurve")


def classify_point(curve: TropicalCurve, primal: PrimalGradients, u, v) -> Phase:
    u, v = Fraction(u), Fraction(v)
    if not in_domain(curve, u, v):
        raise OutsideDomain(f"({u}, {v}) is not inside the open Aztec domain")
    rep = classify_zeros(action_slopes(curve, primal, u, v), curve)
    return phase_from_zeros(rep, curve)


def vertex_map(curve: TropicalCurve, primal: PrimalGradients) -> list:
    k, ell = curve.k, curve.ell
    out = []
    for vx, (gx, gy) in enumerate(primal.vertex_grad):
        p = (Fraction(gy - k, k * ell), Fraction(-gx - ell, k * ell))
        if not in_domain(curve, p[0], p[1], closed=True):
            raise ImageOutsideDomain(f"vertex {vx} maps to {p}")
        out.append(p)
    return out


# leaf group -> (coordinate index, value) of the domain side its vertex lands on
def leaf_side(group: str, k: int, ell: int) -> tuple:
    return {
        "L1": (1, Fraction(0)),
        "L2": (0, Fraction(0)),
        "L3": (1, Fraction(-1, k)),
        "L4": (0, Fraction(-1, ell)),
    }[group]


def corner_image(mu, k: int, ell: int) -> tuple:
    return {
        (-ell, 0): (Fraction(0), Fraction(0)),
        (0, 0): (Fraction(0), Fraction(-1, k)),
        (0, k): (Fraction(-1, ell), Fraction(-1, k)),
        (-ell, k): (Fraction(-1, ell), Fraction(0)),
    }[tuple(mu)]


@dataclass
class ArcticCurveGeometry:
    vertex_images: list
    segments: list  # {"edge", "v", "v2", "a", "b"}
    regions: dict = field(default_factory=dict)  # mu -> {"polygon", "walk_vertices", "empty"}

    def to_json(self) -> dict:
        fmt = lambda p: [str(p[0]), str(p[1])]
        return {
            "vertex_images": [fmt(p) for p in self.vertex_images],
            "segments": [
                {"edge": s["edge"], "v": s["v"], "v2": s["v2"], "a": fmt(s["a"]), "b": fmt(s["b"])}
                for s in self.segments
            ],
            "regions": [
                {
                    "mu": list(mu),
                    "polygon": [fmt(p) for p in r["polygon"]],
                    "empty": r["empty"],
                }
                for mu, r in sorted(self.regions.items(), key=lambda kv: (kv[0][1], kv[0][0]))
            ],
        }


def arctic_curve(curve: TropicalCurve, primal: PrimalGradients) -> ArcticCurveGeometry:
    images = vertex_map(curve, primal)
    segs = [
        {"edge": t, "v": e.v_from, "v2": e.v_to, "a": images[e.v_from], "b": images[e.v_to]}
        for t, e in enumerate(curve.bounded_edges)
    ]
    poly = NewtonPolygon(curve.k, curve.ell)
    regions = {}
    for mu in sorted(curve.sub.vertices, key=lambda m: (m[1], m[0])):
        walk = curve.walk_vertices(mu)
        pts, groups = [], []
        for vx in walk:
            if pts and pts[-1] == images[vx]:
                groups[-1].append(vx)
            else:
                pts.append(images[vx])
                groups.append([vx])
        if curve.components[mu]["bounded"] and len(pts) > 1 and pts[0] == pts[-1]:
            groups[0] = groups.pop() + groups[0]
            pts.pop()
        corner = None
        if poly.classify(mu) == "F":
            corner = corner_image(mu, curve.k, curve.ell)
        full = pts + ([corner] if corner is not None and corner not in pts else [])
        empty = len(full) < 3 or _area2(full) == 0
        regions[mu] = {"polygon": full, "groups": groups, "corner": corner, "empty": empty}
    return ArcticCurveGeometry(images, segs, regions)


def _area2(pts) -> Fraction:
    s = Fraction(0)
    for t in range(len(pts)):
        a, b = pts[t], pts[(t + 1) % len(pts)]
        s += a[0] * b[1] - a[1] * b[0]
    return s


def _interior_angles(poly) -> list:
    """Interior angles of a simple polygon given in either orientation."""
    orient = 1 if _area2(poly) > 0 else -1
    n = len(poly)
    out = []
    for t in range(n):
        a, p, b = poly[t - 1], poly[t], poly[(t + 1) % n]
        d1 = (float(p[0] - a[0]), float(p[1] - a[1]))
        d2 = (float(b[0] - p[0]), float(b[1] - p[1]))
        turn = math.atan2(d1[0] * d2[1] - d1[1] * d2[0], d1[0] * d2[0] + d1[1] * d2[1])
        out.append(math.pi - orient * turn)
    return out


def _vec_angle(a, b) -> float:
    return math.atan2(abs(a[0] * b[1] - a[1] * b[0]), a[0] * b[0] + a[1] * b[1])


@dataclass
class GeometryReport:
    ok: bool
    angle_violations: list
    counts: dict  # mu -> number of vertices with n = 1
    count_violations: list
    orientation_violations: list
    halfplane_violations: list

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "angle_violations": self.angle_violations,
            "n1_counts": [{"mu": list(m), "count": c} for m, c in sorted(self.counts.items(), key=lambda kv: (kv[0][1], kv[0][0]))],
            "count_violations": self.count_violations,
            "orientation_violations": self.orientation_violations,
            "halfplane_violations": self.halfplane_violations,
        }


def verify_geometry(geom: ArcticCurveGeometry, curve: TropicalCurve, primal: PrimalGradients, tol: float = 1e-9) -> GeometryReport:
    poly_cls = NewtonPolygon(curve.k, curve.ell)
    expected = {"S": 4, "Q": 3, "F": 2}
    angle_bad, count_bad, counts = [], [], {}
    for mu, reg in geom.regions.items():
        if reg["empty"]:
            continue
        angles = _interior_angles(reg["polygon"])
        n1 = 0
        for t, grp in enumerate(reg["groups"]):
            theta = angles[t]
            # a chain of vertices collapsed onto one image acts as one corner
            theta_p = -(len(grp) - 1) * math.pi
            for vx in grp:
                a, b = component_incidences(curve, vx, mu)
                theta_p += _vec_angle(a.eta_out, b.eta_out)
            n = (theta + theta_p) / math.pi
            r = round(n)
            if abs(n - r) > tol or r not in (1, 2):
                angle_bad.append({"mu": list(mu), "vertices": grp, "n": n})
            elif r == 1:
                n1 += 1
        counts[mu] = n1
        if n1 != expected[poly_cls.classify(mu)]:
            count_bad.append({"mu": list(mu), "count": n1})

    # region to the left of each oriented image segment belongs to the
    # component on the right of the curve edge
    orient_bad = []
    images = geom.vertex_images
    for s in geom.segments:
        a, b = s["a"], s["b"]
        if a == b:
            continue
        e = curve.bounded_edges[s["edge"]]
        se = curve.sub.edges[e.dual]
        left_dir = rot_ccw(e.eta)
        mu_left = se.a if _dot((se.a[0] - se.b[0], se.a[1] - se.b[1]), left_dir) > 0 else se.b
        mu_right = se.b if mu_left == se.a else se.a
        mid = ((a[0] + b[0]) / 2, (a[1] + b[1]) / 2)
        d = (b[0] - a[0], b[1] - a[1])
        nrm = rot_ccw(d)
        for sgn, want in ((1, mu_right), (-1, mu_left)):
            eps = Fraction(1, 10**6)
            probe = (mid[0] + sgn * eps * nrm[0], mid[1] + sgn * eps * nrm[1])
            if not in_domain(curve, *probe):
                continue
            ph = classify_point(curve, primal, *probe)
            if ph.mu != want:
                orient_bad.append({"edge": s["edge"], "side": "left" if sgn > 0 else "right", "got": ph.to_json()})

    half_bad = []
    for vx, incs in enumerate(curve.incidence):
        vecs = []
        for inc in incs:
            if inc.kind != "edge":
                continue
            e = curve.bounded_edges[inc.index]
            other = e.v_to if e.v_from == vx else e.v_from
            d = (images[other][0] - images[vx][0], images[other][1] - images[vx][1])
            if d != (0, 0):
                vecs.append(d)
        if not _in_halfplane(vecs):
            half_bad.append(vx)

    ok = not (angle_bad or count_bad or orient_bad or half_bad)
    return GeometryReport(ok, angle_bad, counts, count_bad, orient_bad, half_bad)


def _dot(a, b):
    return a[0] * b[0] + a[1] * b[1]


def _in_halfplane(vecs) -> bool:
    if len(vecs) < 2:
        return True
    for d in vecs:
        crosses = [d[0] * w[1] - d[1] * w[0] for w in vecs]
        if all(c >= 0 for c in crosses) or all(c <= 0 for c in crosses):
            return True
    return False


# ------------------------------------------------------------ limit shape


def facet_height(dual: DualActionFunction, k: int, ell: int, mu, u, v) -> Fraction:
    u, v = Fraction(u), Fraction(v)
    mu0 = dual.mu0
    fs = dual.fstar
    return (
        (u + Fraction(1, ell)) * (mu[0] - mu0[0])
        + (v + Fraction(1, k)) * (mu[1] - mu0[1])
        + (fs[tuple(mu)] - fs[mu0]) / (k * ell)
        + 1
    )


def default_path(curve: TropicalCurve, mu) -> list:
    """Deterministic shortest path mu -> mu0 along subdivision edges."""
    sub = curve.sub
    mu0 = (0, sub.k)
    prev = {mu0: None}
    queue = deque([mu0])
    while queue:
        p = queue.popleft()
        nbrs = []
        for s in sub.edges_at(p):
            se = sub.edges[s]
            nbrs.append(se.b if se.a == p else se.a)
        for q in sorted(nbrs, key=lambda m: (m[1], m[0])):
            if q not in prev:
                prev[q] = p
                queue.append(q)
    path = [tuple(mu)]
    while path[-1] != mu0:
        path.append(prev[path[-1]])
    return path


def path_height(curve: TropicalCurve, primal: PrimalGradients, u, v, path) -> Fraction:
    """h = 1 + (1/k ell) * sum of n * dF(eta) over steps, eta = rot_cw(step)/n, path mu -> mu0."""
    sub = curve.sub
    k, ell = curve.k, curve.ell
    slopes = action_slopes(curve, primal, u, v)
    tot = Fraction(0)
    for a, b in zip(path, path[1:]):
        s = sub.edge_between(a, b)
        if s is None:
            raise ValueError(f"{a} and {b} are not joined by a subdivision edge")
        n = sub.edges[s].lattice_length
        step = ((b[0] - a[0]) // n, (b[1] - a[1]) // n)
        eta = (step[1], -step[0])
        kind, idx = curve.dual_of_subedge(s)
        if kind == "edge":
            stored, val = curve.bounded_edges[idx].eta, slopes.edge[idx]
        else:
            stored, val = curve.leaves[idx].eta_in, slopes.leaf[idx]
        sgn = 1 if stored == eta else -1
        assert stored == (sgn * eta[0], sgn * eta[1])
        tot += n * sgn * val
    return 1 + tot / (k * ell)


def limit_shape(curve: TropicalCurve, dual: DualActionFunction, primal: PrimalGradients, u, v) -> Fraction:
    u, v = Fraction(u), Fraction(v)
    if not in_domain(curve, u, v, closed=True):
        raise OutsideDomain(f"({u}, {v}) is outside the Aztec domain")
    mu = None
    if in_domain(curve, u, v):
        mu = classify_point(curve, primal, u, v).mu
    if mu is None:
        mu = _nearby_facet(curve, primal, u, v)
    return facet_height(dual, curve.k, curve.ell, mu, u, v)


_PROBES = [(1, 0), (0, 1), (-1, 0), (0, -1), (1, 2), (-2, 1), (-1, -2), (2, -1), (3, 1), (-1, 3)]


def _nearby_facet(curve, primal, u, v):
    # continuity: any facet touching (u, v) gives the same value there
    for scale in (10**6, 10**9, 10**12):
        eps = Fraction(1, scale)
        for d in _PROBES:
            p = (u + eps * d[0], v + eps * d[1])
            if in_domain(curve, *p):
                ph = classify_point(curve, primal, *p)
                if ph.mu is not None:
                    return ph.mu
    raise OutsideDomain(f"no facet found near ({u}, {v})")
