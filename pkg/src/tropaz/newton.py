"""Newton rectangle, the regular subdivision induced by the tropical surface
tension, genericity classification and the tropical polynomial."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import gcd

from .covers import newton_points


@dataclass(frozen=True)
class NewtonPolygon:
    k: int
    ell: int

    @property
    def points(self) -> list:
        return newton_points(self.k, self.ell)

    def classify(self, mu) -> str:
        m1, m2 = mu
        on_x = m1 in (-self.ell, 0)
        on_y = m2 in (0, self.k)
        if on_x and on_y:
            return "F"
        if on_x or on_y:
            return "Q"
        return "S"

    @property
    def corners(self) -> list:
        return [p for p in self.points if self.classify(p) == "F"]

    @property
    def boundary(self) -> list:
        return [p for p in self.points if self.classify(p) == "Q"]

    @property
    def interior(self) -> list:
        return [p for p in self.points if self.classify(p) == "S"]


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points) -> list:
    """Strictly convex hull, counterclockwise, starting from the lowest-then-leftmost point."""
    pts = sorted(set(points), key=lambda p: (p[1], p[0]))
    if len(pts) <= 2:
        return pts
    srt = sorted(pts)
    lower, upper = [], []
    for p in srt:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(srt):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    start = min(range(len(hull)), key=lambda t: (hull[t][1], hull[t][0]))
    return hull[start:] + hull[:start]


def polygon_area2(poly) -> Fraction:
    """Twice the signed area."""
    s = 0
    for t in range(len(poly)):
        a, b = poly[t], poly[(t + 1) % len(poly)]
        s += a[0] * b[1] - a[1] * b[0]
    return Fraction(s)


def lattice_length(a, b) -> int:
    return gcd(abs(b[0] - a[0]), abs(b[1] - a[1]))


@dataclass
class Face:
    vertices: tuple  # ccw
    points: tuple  # every lattice point lying on the face
    plane: tuple  # (a, b, c): lift s = a*m1 + b*m2 + c


@dataclass
class SubEdge:
    a: tuple
    b: tuple
    faces: tuple  # one or two face indices
    side: str | None  # 'left', 'bottom', 'right', 'top' for boundary edges

    @property
    def lattice_length(self) -> int:
        return lattice_length(self.a, self.b)


@dataclass
class Subdivision:
    k: int
    ell: int
    estar: dict
    faces: list
    edges: list
    vertices: frozenset
    edge_index: dict = field(default_factory=dict)

    def edge_between(self, a, b):
        return self.edge_index.get(frozenset((tuple(a), tuple(b))))

    def faces_at(self, mu) -> list:
        mu = tuple(mu)
        return [t for t, f in enumerate(self.faces) if mu in f.vertices]

    def edges_at(self, mu) -> list:
        mu = tuple(mu)
        return [t for t, e in enumerate(self.edges) if mu in (e.a, e.b)]


def _side(a, b, k, ell):
    if a[0] == b[0] == -ell:
        return "left"
    if a[1] == b[1] == 0:
        return "bottom"
    if a[0] == b[0] == 0:
        return "right"
    if a[1] == b[1] == k:
        return "top"
    return None


def _plane(p, q, r, s):
    """Plane s = a*x + b*y + c through three lifted points (exact)."""
    (x1, y1), (x2, y2), (x3, y3) = p, q, r
    det = (x2 - x1) * (y3 - y1) - (x3 - x1) * (y2 - y1)
    if det == 0:
        return None
    s1, s2, s3 = s[p], s[q], s[r]
    a = Fraction((s2 - s1) * (y3 - y1) - (s3 - s1) * (y2 - y1), det)
    b = Fraction((x2 - x1) * (s3 - s1) - (x3 - x1) * (s2 - s1), det)
    c = s1 - a * x1 - b * y1
    return (a, b, c)


def build_subdivision(table_or_estar, k: int | None = None, ell: int | None = None) -> Subdivision:
    """Project the bounded upper faces of the lift {(mu, s): s <= E*(mu)}.

    Accepts a SurfaceTensionTable or a plain {mu: E*} mapping (then k, ell are required).
    Coplanar point sets are kept as one face, so degeneracies stay visible.
    """
    if isinstance(table_or_estar, dict):
        estar = {tuple(m): Fraction(v) for m, v in table_or_estar.items()}
        assert k is not None and ell is not None
    else:
        estar = table_or_estar.estar_map()
        k, ell = table_or_estar.k, table_or_estar.ell
    pts = newton_points(k, ell)
    seen = {}
    for p, q, r in combinations(pts, 3):
        pl = _plane(p, q, r, estar)
        if pl is None:
            continue
        a, b, c = pl
        ok = True
        on = []
        for m in pts:
            val = a * m[0] + b * m[1] + c
            d = estar[m] - val
            if d > 0:
                ok = False
                break
            if d == 0:
                on.append(m)
        if ok:
            key = frozenset(on)
            if key not in seen:
                seen[key] = pl
    faces = []
    for key, pl in seen.items():
        hull = convex_hull(key)
        faces.append(Face(tuple(hull), tuple(sorted(key, key=lambda m: (m[1], m[0]))), pl))
    faces.sort(key=lambda f: sorted((m[1], m[0]) for m in f.vertices))

    vertices = frozenset(v for f in faces for v in f.vertices)
    edge_faces = {}
    for t, f in enumerate(faces):
        n = len(f.vertices)
        for s in range(n):
            a, b = f.vertices[s], f.vertices[(s + 1) % n]
            edge_faces.setdefault(frozenset((a, b)), []).append(t)
    edges = []
    index = {}
    for key in sorted(edge_faces, key=lambda kk: sorted((m[1], m[0]) for m in kk)):
        a, b = sorted(key, key=lambda m: (m[1], m[0]))
        fs = tuple(edge_faces[key])
        side = _side(a, b, k, ell) if len(fs) == 1 else None
        index[key] = len(edges)
        edges.append(SubEdge(a, b, fs, side))
    return Subdivision(k, ell, estar, faces, edges, vertices, index)


@dataclass
class GenericityReport:
    smooth: bool
    reasons: list

    def to_json(self) -> dict:
        return {"smooth": self.smooth, "reasons": self.reasons}


def classify_genericity(sub: Subdivision) -> GenericityReport:
    reasons = []
    for mu in newton_points(sub.k, sub.ell):
        if mu not in sub.vertices:
            reasons.append({"kind": "NonVertexLatticePoint", "mu": list(mu)})
    for f in sub.faces:
        area2 = polygon_area2(f.vertices)
        if len(f.vertices) != 3:
            reasons.append({"kind": "NonTriangleFace", "polygon": [list(v) for v in f.vertices]})
        elif area2 != 1:
            reasons.append({
                "kind": "OversizedTriangle",
                "polygon": [list(v) for v in f.vertices],
                "area": str(area2 / 2),
            })
    smooth = not reasons
    if smooth:
        assert len(sub.faces) == 2 * sub.k * sub.ell
    return GenericityReport(smooth, reasons)


def eval_tropical_poly(estar, x, y) -> tuple[Fraction, set]:
    """max over mu of mu1*x + mu2*y + E*(mu), with the exact argmax set."""
    if not isinstance(estar, dict):
        estar = estar.estar_map()
    x, y = Fraction(x), Fraction(y)
    vals = {mu: mu[0] * x + mu[1] * y + s for mu, s in estar.items()}
    best = max(vals.values())
    return best, {mu for mu, v in vals.items() if v == best}


def tropical_margin(estar, x, y) -> Fraction:
    """Gap between the largest and second largest monomial at (x, y)."""
    if not isinstance(estar, dict):
        estar = estar.estar_map()
    x, y = Fraction(x), Fraction(y)
    vals = sorted((mu[0] * x + mu[1] * y + s for mu, s in estar.items()), reverse=True)
    return vals[0] - vals[1]
