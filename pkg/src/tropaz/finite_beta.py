"""Finite-temperature numerics: P_beta as a signed sum over torus covers, the
Ronkin function and surface tension by torus quadrature, and Gibbs edge
marginals from the inverse Kasteleyn matrix.

Every quantity that is evaluated on a torus |z| = e^{beta x}, |w| = e^{beta y}
is a Laurent sum of terms  sign * e^{beta E} z^a w^b  with exact rational E.
The largest exponent at the anchor is factored out before anything is
exponentiated, so large beta does not overflow.

Two backends: numpy complex128 when the working precision is at most 53
bits, and gmpy2 mpc numbers (held in numpy object arrays) otherwise.
"""

from __future__ import annotations

import math
import os
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction

import gmpy2
import numpy as np

from .covers import enumerate_covers
from .errors import ConfigError, EmptyComponentInterior, NearZeroOnTorus, SingularKasteleynOnContour, ValidationError
from .gibbs0 import _as_ref, _minor_matchings, lifted_black, lifted_white, perm_sign
from .lattice import TorusGraph
from .newton import Subdivision, eval_tropical_poly, tropical_margin

DEFAULT_BITS = 256
DEFAULT_NODES = 256
NEAR_ZERO = 1e-30


def precision_bits(explicit=None) -> int:
    """Working precision: explicit value, else TROPAZ_PRECISION_BITS, else 256."""
    raw = explicit if explicit is not None else os.environ.get("TROPAZ_PRECISION_BITS") or DEFAULT_BITS
    try:
        bits = int(raw)
    except (TypeError, ValueError):
        raise ConfigError(f"precision must be an integer number of bits, got {raw!r}") from None
    if bits < 24:
        raise ConfigError(f"precision of {bits} bits is too small")
    return bits


@dataclass(frozen=True)
class QuadratureSpec:
    nodes: int = DEFAULT_NODES
    bits: int | None = None
    shift: Fraction = Fraction(1, 2)  # node offset in units of the grid step

    def __post_init__(self):
        m = self.nodes
        if m < 16 or m & (m - 1):
            raise ValidationError("nodes per circle must be a power of two, at least 16")

    @property
    def precision(self) -> int:
        return precision_bits(self.bits)

    def halved(self) -> "QuadratureSpec":
        return QuadratureSpec(self.nodes // 2, self.bits, self.shift)


@dataclass
class SignedCoverSum:
    """P_beta(z, w) = sum sign * e^{beta E} z^{mu1} w^{mu2}, one term per torus cover."""

    terms: list  # (sign, energy, (mu1, mu2))

    def support(self) -> set:
        return {t[2] for t in self.terms}

    def grouped(self) -> dict:
        out = defaultdict(list)
        for s, e, mu in self.terms:
            out[mu].append((s, e))
        return dict(out)

    def describe(self) -> list:
        return [{"sign": s, "energy": str(e), "mu": list(mu)} for s, e, mu in self.terms]


def char_poly_beta(graph: TorusGraph) -> SignedCoverSum:
    terms = []
    for c in enumerate_covers(graph):
        perm = [graph.edges[e].black for e in c.edges]
        sign = perm_sign(perm)
        for e in c.edges:
            sign *= graph.edges[e].sigma
        terms.append((sign, c.energy, c.mu))
    return SignedCoverSum(terms)


# ------------------------------------------------------------- backends


class _Float:
    name = "complex128"

    def __init__(self, bits):
        self.bits = 53

    def exp(self, x):
        return math.exp(x)

    def real(self, q: Fraction):
        return float(q)

    def roots(self, M, shift):
        t = 2 * np.pi * (np.arange(M) + float(shift)) / M
        return np.exp(1j * t)

    def powers(self, roots, a):
        return roots ** a

    def zeros(self, shape):
        return np.zeros(shape, dtype=np.complex128)

    def abs(self, arr):
        return np.abs(arr)

    def logabs_mean(self, arr):
        return float(np.mean(np.log(np.abs(arr))))

    def mean(self, arr):
        return complex(np.mean(arr))

    def to_float(self, x):
        return float(x)


class _Multi:
    name = "gmpy2"

    def __init__(self, bits):
        self.bits = bits
        self.ctx = gmpy2.context(precision=bits)

    def exp(self, x):
        with gmpy2.context(self.ctx):
            return gmpy2.exp(x)

    def real(self, q: Fraction):
        with gmpy2.context(self.ctx):
            return gmpy2.mpfr(q.numerator) / q.denominator

    def roots(self, M, shift):
        with gmpy2.context(self.ctx):
            pi2 = 2 * gmpy2.const_pi()
            s = gmpy2.mpfr(shift.numerator) / shift.denominator
            return np.array([gmpy2.exp(gmpy2.mpc(0, pi2 * (j + s) / M)) for j in range(M)], dtype=object)

    def powers(self, roots, a):
        with gmpy2.context(self.ctx):
            if a >= 0:
                return np.array([r ** a for r in roots], dtype=object)
            return np.array([1 / r ** (-a) for r in roots], dtype=object)

    def zeros(self, shape):
        with gmpy2.context(self.ctx):
            out = np.empty(shape, dtype=object)
            out.fill(gmpy2.mpc(0))
            return out

    def abs(self, arr):
        with gmpy2.context(self.ctx):
            return np.vectorize(abs, otypes=[object])(arr)

    def logabs_mean(self, arr):
        with gmpy2.context(self.ctx):
            flat = arr.ravel()
            acc = gmpy2.mpfr(0)
            for x in flat:
                acc += gmpy2.log(abs(x))
            return acc / len(flat)

    def mean(self, arr):
        with gmpy2.context(self.ctx):
            acc = gmpy2.mpc(0)
            for x in arr.ravel():
                acc += x
            return acc / arr.size

    def to_float(self, x):
        return float(x)


def backend(bits: int):
    return _Float(bits) if bits <= 53 else _Multi(bits)


def _grid(be, coeffs: dict, M: int, shift: Fraction, ctx=None):
    """Values of sum_{(a, b)} c_ab zeta^a omega^b on the M x M torus grid."""
    roots = be.roots(M, shift)
    cache = {}

    def pw(a):
        if a not in cache:
            cache[a] = be.powers(roots, a)
        return cache[a]

    by_b = defaultdict(list)
    for (a, b), c in coeffs.items():
        by_b[b].append((a, c))
    out = be.zeros((M, M))
    ctx = getattr(be, "ctx", None)
    with (gmpy2.context(ctx) if ctx is not None else _null()):
        for b, items in sorted(by_b.items()):
            row = be.zeros(M)
            for a, c in sorted(items):
                row = row + c * pw(a)
            out = out + np.multiply.outer(row, pw(b))
    return out


class _null:
    def __enter__(self):
        return self

    def __exit__(self, *a):
        return False


def _ctx(be):
    """Working-precision context of a backend (a no-op for floats)."""
    ctx = getattr(be, "ctx", None)
    return gmpy2.context(ctx) if ctx is not None else _null()


def _scaled_coeffs(be, grouped: dict, beta, x, y, extra=Fraction(0), shift_exp=None, offset=(0, 0)):
    """Coefficients sum sign * e^{beta (E + (a - a0) x + (b - b0) y + extra) - shift} for each exponent.

    Exponents are returned relative to `offset`.  The returned shift is the
    largest exponent, in units of beta (a Fraction) when not given.
    """
    beta = Fraction(beta)
    expo = {}
    for (a, b), lst in grouped.items():
        for s, e in lst:
            expo.setdefault((a, b), []).append((s, e + (a - offset[0]) * x + (b - offset[1]) * y + extra))
    if shift_exp is None:
        shift_exp = max(val for lst in expo.values() for _, val in lst)
    out = {}
    with _ctx(be):
        for (a, b), lst in expo.items():
            c = 0
            for s, val in lst:
                c = c + s * be.exp(be.real(beta * (val - shift_exp)))
            out[(a - offset[0], b - offset[1])] = c
    return out, shift_exp


# ------------------------------------------------------------- Ronkin


@dataclass
class RonkinResult:
    value: object  # beta^0 scale: R_beta(x, y)
    error: float | None
    backend: str
    nodes: int
    bits: int

    def to_json(self) -> dict:
        return {
            "value": _fmt(self.value),
            "error_estimate": None if self.error is None else repr(self.error),
            "backend": self.backend,
            "nodes": self.nodes,
            "bits": self.bits,
        }


def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(x)
    if not isinstance(x, (gmpy2.mpfr(0).__class__, gmpy2.mpc(0).__class__)):
        x = gmpy2.mpfr(x)
    return x.__format__(".30g")


def _ronkin_once(csum: SignedCoverSum, beta, x, y, spec: QuadratureSpec):
    be = backend(spec.precision)
    coeffs, top = _scaled_coeffs(be, csum.grouped(), beta, x, y)
    vals = _grid(be, coeffs, spec.nodes, spec.shift)
    mags = be.abs(vals)
    if be.to_float(min(mags.ravel())) < NEAR_ZERO:
        raise NearZeroOnTorus(f"|P_beta| nearly vanishes on the torus at ({x}, {y})")
    mean = be.logabs_mean(vals)
    with _ctx(be):
        return be.real(Fraction(beta) * top) + mean, be


def ronkin(csum: SignedCoverSum, beta, x, y, spec: QuadratureSpec | None = None,
           estimate_error: bool = True) -> RonkinResult:
    spec = spec or QuadratureSpec()
    x, y = Fraction(x), Fraction(y)
    estar = {}
    for s, e, mu in csum.terms:
        estar[mu] = max(estar.get(mu, e), e)
    if tropical_margin(estar, x, y) <= 0:
        raise NearZeroOnTorus(f"({x}, {y}) lies on the tropical curve")
    val, be = _ronkin_once(csum, beta, x, y, spec)
    err = None
    if estimate_error and spec.nodes >= 32:
        coarse, _ = _ronkin_once(csum, beta, x, y, spec.halved())
        err = abs(float(val - coarse))
    return RonkinResult(val, err, be.name, spec.nodes, be.bits)


# ------------------------------------------------------------- anchors


def anchor_point(sub: Subdivision, mu) -> tuple:
    """A point inside the complement component of mu.

    Centroid of the curve vertices around mu, pushed outward along the
    leaves when the component is unbounded; the tropical margin is checked.
    """
    mu = tuple(mu)
    if mu not in sub.vertices:
        raise EmptyComponentInterior(f"{mu} is not a vertex of the subdivision")
    pts = []
    for t in sub.faces_at(mu):
        a, b, _ = sub.faces[t].plane
        pts.append((-a, -b))
    cx = sum(p[0] for p in pts) / len(pts)
    cy = sum(p[1] for p in pts) / len(pts)
    outward = {"left": (-1, 0), "bottom": (0, -1), "right": (1, 0), "top": (0, 1)}
    for s in sub.edges_at(mu):
        side = sub.edges[s].side
        if side is not None:
            d = outward[side]
            cx += d[0]
            cy += d[1]
    p = (Fraction(cx), Fraction(cy))
    val, arg = eval_tropical_poly(sub.estar, *p)
    if arg != {mu} or tropical_margin(sub.estar, *p) <= 0:
        raise EmptyComponentInterior(f"no interior point found for the component of {mu}")
    return p


@dataclass
class TensionResult:
    mu: tuple
    beta: Fraction
    anchor: tuple
    sigma: object
    scaled: float  # sigma / beta
    error: float | None

    def to_json(self) -> dict:
        return {
            "mu": list(self.mu),
            "beta": str(self.beta),
            "anchor": [str(self.anchor[0]), str(self.anchor[1])],
            "sigma": _fmt(self.sigma),
            "sigma_over_beta": repr(self.scaled),
            "error_estimate": None if self.error is None else repr(self.error),
        }


def surface_tension_beta(csum: SignedCoverSum, sub: Subdivision, mu, beta,
                         spec: QuadratureSpec | None = None, anchor=None,
                         estimate_error: bool = True) -> TensionResult:
    spec = spec or QuadratureSpec()
    beta = Fraction(beta)
    x, y = anchor if anchor is not None else anchor_point(sub, mu)
    r = ronkin(csum, beta, x, y, spec, estimate_error)
    be = backend(spec.precision)
    with _ctx(be):
        sigma = -r.value + be.real(mu[0] * beta * x + mu[1] * beta * y)
    return TensionResult(tuple(mu), beta, (x, y), sigma, float(sigma) / float(beta), r.error)


# ------------------------------------------------------------- Gibbs marginals


def adjugate_terms(graph: TorusGraph, w0: int, b0: int) -> dict:
    """adj(K_beta)_{b0, w0} as {(a, b): [(sign, energy)]}."""
    allowed = frozenset(range(len(graph.edges)))
    n = graph.n_vertices
    out = defaultdict(list)
    for m in _minor_matchings(graph, allowed, w0, b0):
        perm = [0] * n
        perm[w0] = b0
        sign = 1
        a = b = 0
        energy = Fraction(0)
        for e in m:
            ed = graph.edges[e]
            perm[ed.white] = ed.black
            sign *= ed.sigma
            a -= ed.cross_u
            b += ed.cross_v
            energy += ed.logw
        out[(a, b)].append((perm_sign(perm) * sign, energy))
    return dict(out)


@dataclass
class GibbsBetaResult:
    value: object
    error: float | None
    matrix: list

    def to_json(self) -> dict:
        return {"probability": _fmt(self.value), "error_estimate": None if self.error is None else repr(self.error)}


class _InverseKasteleyn:
    """K_beta^{-1}(b~, w~) on the torus |z| = e^{beta x}, |w| = e^{beta y}."""

    def __init__(self, graph: TorusGraph, csum: SignedCoverSum, beta, x, y, spec: QuadratureSpec):
        self.graph = graph
        self.beta = Fraction(beta)
        self.x, self.y = Fraction(x), Fraction(y)
        self.spec = spec
        self.be = backend(spec.precision)
        coeffs, self.top = _scaled_coeffs(self.be, csum.grouped(), beta, self.x, self.y)
        self.den = _grid(self.be, coeffs, spec.nodes, spec.shift)
        mags = self.be.abs(self.den)
        if self.be.to_float(min(mags.ravel())) < NEAR_ZERO:
            raise SingularKasteleynOnContour(f"P_beta nearly vanishes on the contour at ({x}, {y})")
        self._adj = {}

    def entry(self, black, white, extra=Fraction(0)):
        """e^{beta extra} * K^{-1}(b~, w~); `extra` lets callers fold in an edge weight."""
        b, (mb, nb) = black
        w, (mw, nw) = white
        if (b, w) not in self._adj:
            self._adj[(b, w)] = adjugate_terms(self.graph, w, b)
        target = (nb - nw, mw - mb)
        coeffs, _ = _scaled_coeffs(
            self.be, self._adj[(b, w)], self.beta, self.x, self.y,
            extra=extra, shift_exp=self.top, offset=target,
        )
        if not coeffs:
            return 0
        num = _grid(self.be, coeffs, self.spec.nodes, self.spec.shift)
        ctx = getattr(self.be, "ctx", None)
        with (gmpy2.context(ctx) if ctx is not None else _null()):
            return self.be.mean(num / self.den)


def _det_small(M, be):
    n = len(M)
    A = [list(r) for r in M]
    ctx = getattr(be, "ctx", None)
    with (gmpy2.context(ctx) if ctx is not None else _null()):
        det = 1
        for c in range(n):
            piv = max(range(c, n), key=lambda r: abs(complex(A[r][c])))
            if abs(complex(A[piv][c])) == 0:
                return 0
            if piv != c:
                A[c], A[piv] = A[piv], A[c]
                det = -det
            det = det * A[c][c]
            for r in range(c + 1, n):
                f = A[r][c] / A[c][c]
                for j in range(c, n):
                    A[r][j] = A[r][j] - f * A[c][j]
        return det


def _marginal_once(graph, csum, refs, x, y, beta, spec):
    inv = _InverseKasteleyn(graph, csum, beta, x, y, spec)
    whites = [lifted_white(graph, r) for r in refs]
    blacks = [lifted_black(graph, r) for r in refs]
    edges = [graph.edge(r) for r in refs]
    p = len(refs)
    with _ctx(inv.be):
        M = [[edges[t].sigma * inv.entry(blacks[s], whites[t], extra=edges[t].logw) for t in range(p)] for s in range(p)]
    return _det_small(M, inv.be), M


def gibbs_beta_marginal(graph: TorusGraph, edges, xy, beta, spec: QuadratureSpec | None = None,
                        csum: SignedCoverSum | None = None, estimate_error: bool = False) -> GibbsBetaResult:
    spec = spec or QuadratureSpec()
    csum = csum or char_poly_beta(graph)
    refs = [_as_ref(e) for e in edges]
    x, y = Fraction(xy[0]), Fraction(xy[1])
    val, M = _marginal_once(graph, csum, refs, x, y, beta, spec)
    val = val.real if hasattr(val, "real") else val
    err = None
    if estimate_error and spec.nodes >= 32:
        coarse, _ = _marginal_once(graph, csum, refs, x, y, beta, spec.halved())
        coarse = coarse.real if hasattr(coarse, "real") else coarse
        err = abs(float(val - coarse))
    return GibbsBetaResult(val, err, M)
