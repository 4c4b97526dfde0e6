"""The dual action function f* (a Kirchhoff problem on the subdivided
rectangle) and the exact 1-form df_t it induces on the tropical curve.

Conventions: a curve edge with primitive vector eta is dual to the
subdivision edge with direction rot_ccw(eta), and

    df_t(eta) = df*(rot_ccw(eta)) = f*(mu + rot_ccw(eta)) - f*(mu).

Boundary data: f* drops by ell per upward unit step on the left side, rises
by k per leftward unit step on the bottom side, and is constant along the
right and top sides, with f*(0, k) = 0.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InconsistentThirdEdge
from .linalg import solve_rational
from .newton import Subdivision
from .tropical_curve import TropicalCurve, rot_ccw

RESIDUES = None  # filled lazily: group -> residue, depends on (k, ell)


def residues(k: int, ell: int) -> dict:
    """Values of df_t on inward leaf vectors."""
    return {"L1": Fraction(-ell), "L2": Fraction(k), "L3": Fraction(0), "L4": Fraction(0)}


def boundary_value(mu, k: int, ell: int) -> Fraction | None:
    m1, m2 = mu
    if m2 == k or m1 == 0:
        return Fraction(0)
    if m2 == 0:
        return Fraction(-k * m1)
    if m1 == -ell:
        return Fraction(k * ell - ell * m2)
    return None


@dataclass
class OneForm:
    """Values on stored orientations: bounded edges along eta, leaves along inward eta."""

    edge: dict = field(default_factory=dict)
    leaf: dict = field(default_factory=dict)

    def outward(self, inc) -> Fraction:
        if inc.kind == "edge":
            return inc.sign * self.edge[inc.index]
        return inc.sign * self.leaf[inc.index]


@dataclass
class DualActionFunction:
    fstar: dict
    gradients: dict  # face index -> (g1, g2)
    mu0: tuple

    def value(self, mu) -> Fraction:
        return self.fstar[tuple(mu)]


@dataclass
class PrimalGradients:
    oneform: OneForm
    vertex_grad: list  # vertex -> (d_x f_t, d_y f_t)


def laplacian_residual(sub: Subdivision, curve: TropicalCurve, fstar: dict, mu) -> Fraction:
    """sum over incident subdivision edges of l*(e*) times the slope of f* away from mu."""
    mu = tuple(mu)
    tot = Fraction(0)
    for s in sub.edges_at(mu):
        se = sub.edges[s]
        kind, idx = curve.dual_of_subedge(s)
        if kind != "edge":
            raise ValueError("Laplacian is only defined at interior points")
        other = se.b if se.a == mu else se.a
        lstar = curve.bounded_edges[idx].length
        tot += lstar * (fstar[other] - fstar[mu]) / se.lattice_length
    return tot


def face_gradient(face, fstar) -> tuple:
    a, b, c = face.vertices[:3]
    r1 = (b[0] - a[0], b[1] - a[1], fstar[b] - fstar[a])
    r2 = (c[0] - a[0], c[1] - a[1], fstar[c] - fstar[a])
    det = r1[0] * r2[1] - r1[1] * r2[0]
    g1 = Fraction(r1[2] * r2[1] - r1[1] * r2[2], det)
    g2 = Fraction(r1[0] * r2[2] - r1[2] * r2[0], det)
    return (g1, g2)


def solve_dual(sub: Subdivision, curve: TropicalCurve) -> DualActionFunction:
    k, ell = sub.k, sub.ell
    pts = sorted(sub.vertices, key=lambda m: (m[1], m[0]))
    fstar = {}
    unknown = []
    for mu in pts:
        bv = boundary_value(mu, k, ell)
        if bv is None:
            unknown.append(mu)
        else:
            fstar[mu] = bv
    if unknown:
        col = {mu: t for t, mu in enumerate(unknown)}
        A = [[Fraction(0)] * len(unknown) for _ in unknown]
        rhs = [Fraction(0)] * len(unknown)
        for r, mu in enumerate(unknown):
            for s in sub.edges_at(mu):
                se = sub.edges[s]
                _, idx = curve.dual_of_subedge(s)
                other = se.b if se.a == mu else se.a
                w = curve.bounded_edges[idx].length / se.lattice_length
                A[r][r] -= w
                if other in col:
                    A[r][col[other]] += w
                else:
                    rhs[r] -= w * fstar[other]
        for mu, val in zip(unknown, solve_rational(A, rhs)):
            fstar[mu] = val
    grads = {t: face_gradient(f, fstar) for t, f in enumerate(sub.faces)}
    return DualActionFunction(fstar, grads, (0, k))


def _df_along(curve: TropicalCurve, fstar: dict, sidx: int, eta) -> Fraction:
    se = curve.sub.edges[sidx]
    d = rot_ccw(eta)
    n = se.lattice_length
    if (se.a[0] + n * d[0], se.a[1] + n * d[1]) == se.b:
        return (fstar[se.b] - fstar[se.a]) / n
    assert (se.b[0] + n * d[0], se.b[1] + n * d[1]) == se.a
    return (fstar[se.a] - fstar[se.b]) / n


def derive_primal(dual: DualActionFunction, curve: TropicalCurve) -> PrimalGradients:
    fstar = dual.fstar
    form = OneForm()
    for t, e in enumerate(curve.bounded_edges):
        form.edge[t] = _df_along(curve, fstar, e.dual, e.eta)
    res = residues(curve.k, curve.ell)
    for t, lf in enumerate(curve.leaves):
        val = _df_along(curve, fstar, lf.dual, lf.eta_in)
        if val != res[lf.group]:
            raise InconsistentThirdEdge(f"leaf {t} carries {val}, expected residue {res[lf.group]}")
        form.leaf[t] = val
    grads = []
    for v, incs in enumerate(curve.incidence):
        a, b = incs[0], incs[1]
        ea, eb = a.eta_out, b.eta_out
        va, vb = form.outward(a), form.outward(b)
        det = ea[0] * eb[1] - ea[1] * eb[0]
        gx = Fraction(va * eb[1] - ea[1] * vb, det)
        gy = Fraction(ea[0] * vb - va * eb[0], det)
        for c in incs[2:]:
            if gx * c.eta_out[0] + gy * c.eta_out[1] != form.outward(c):
                raise InconsistentThirdEdge(f"gradient at vertex {v} fails on a third edge")
        grads.append((gx, gy))
    return PrimalGradients(form, grads)


def linear_oneform(curve: TropicalCurve, a, b) -> OneForm:
    """The 1-form of the linear function a*x + b*y (e.g. dx for a=1, b=0)."""
    form = OneForm()
    for t, e in enumerate(curve.bounded_edges):
        form.edge[t] = Fraction(a) * e.eta[0] + Fraction(b) * e.eta[1]
    for t, lf in enumerate(curve.leaves):
        form.leaf[t] = Fraction(a) * lf.eta_in[0] + Fraction(b) * lf.eta_in[1]
    return form


@dataclass
class ExactnessReport:
    exact: bool
    cycle_integrals: list
    residue_sum: Fraction
    balancing_defects: list

    def to_json(self) -> dict:
        return {
            "exact": self.exact,
            "cycle_integrals": [str(v) for v in self.cycle_integrals],
            "residue_sum": str(self.residue_sum),
            "balancing_defects": self.balancing_defects,
        }


def verify_exactness(form: OneForm, curve: TropicalCurve) -> ExactnessReport:
    """Integrals of l(e)*value over a fundamental cycle basis, residue sum, balancing."""
    nv = len(curve.vertices)
    adj = [[] for _ in range(nv)]
    for t, e in enumerate(curve.bounded_edges):
        adj[e.v_from].append((t, e.v_to, 1))
        adj[e.v_to].append((t, e.v_from, -1))
    # potential along a BFS spanning forest
    pot = [None] * nv
    tree = set()
    for root in range(nv):
        if pot[root] is not None:
            continue
        pot[root] = Fraction(0)
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for t, u, sgn in adj[v]:
                if pot[u] is None:
                    e = curve.bounded_edges[t]
                    pot[u] = pot[v] + sgn * e.length * form.edge[t]
                    tree.add(t)
                    queue.append(u)
    cycles = []
    for t, e in enumerate(curve.bounded_edges):
        if t in tree:
            continue
        cycles.append(pot[e.v_from] + e.length * form.edge[t] - pot[e.v_to])
    rsum = sum(form.leaf.values(), Fraction(0))
    defects = []
    for v, incs in enumerate(curve.incidence):
        s = sum((form.outward(i) for i in incs), Fraction(0))
        if s != 0:
            defects.append(v)
    exact = all(c == 0 for c in cycles) and rsum == 0 and not defects
    return ExactnessReport(exact, cycles, rsum, defects)


def reconstruct_fstar(form: OneForm, curve: TropicalCurve, base=None, base_value=0) -> dict:
    """Integrate df* = df_t over subdivision edges starting from a base point."""
    sub = curve.sub
    base = tuple(base) if base is not None else (0, sub.k)
    vals = {base: Fraction(base_value)}
    queue = deque([base])
    while queue:
        mu = queue.popleft()
        for s in sub.edges_at(mu):
            se = sub.edges[s]
            other = se.b if se.a == mu else se.a
            if other in vals:
                continue
            kind, idx = curve.dual_of_subedge(s)
            if kind == "edge":
                eta, val = curve.bounded_edges[idx].eta, form.edge[idx]
            else:
                eta, val = curve.leaves[idx].eta_in, form.leaf[idx]
            d = rot_ccw(eta)
            n = se.lattice_length
            step = (other[0] - mu[0], other[1] - mu[1])
            sgn = 1 if step == (n * d[0], n * d[1]) else -1
            vals[other] = vals[mu] + sgn * n * val
            queue.append(other)
    return vals
