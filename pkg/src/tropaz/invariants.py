"""All-invariants check runner used by `tropaz check` and the acceptance tests."""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from .action import (
    action_slopes,
    classify_point,
    classify_zeros,
    default_path,
    facet_height,
    leaf_side,
    path_height,
    vertex_map,
    verify_geometry,
)
from .covers import color_multiweb, maximizer_graph
from .errors import TropazError
from .gibbs0 import EdgeRef, components, edge_probabilities, gibbs_zero_measure, oracle_component_measure
from .kirchhoff import laplacian_residual, verify_exactness
from .pipeline import Pipeline
from .tropical_curve import leaf_lines_from_weights


@dataclass
class SuiteResult:
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)
    skipped: str | None = None

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "skipped": self.skipped, "detail": self.detail}


def random_points(k: int, ell: int, count: int, seed: int = 0, denom: int = 997) -> list:
    """Rational points of the open domain; the prime denominator keeps them off special lines."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        a, b = rng.randrange(1, denom), rng.randrange(1, denom)
        out.append((Fraction(-a, denom * ell), Fraction(-b, denom * k)))
    return out


def check_balancing(p: Pipeline) -> SuiteResult:
    bad = []
    for vx, incs in enumerate(p.curve.incidence):
        sx = sum(p.sub.edges[i.dual].lattice_length * i.eta_out[0] for i in incs)
        sy = sum(p.sub.edges[i.dual].lattice_length * i.eta_out[1] for i in incs)
        if sx or sy:
            bad.append(vx)
    return SuiteResult("balancing", not bad, {"vertices": len(p.curve.vertices), "violations": bad})


def check_leaf_lines(p: Pipeline) -> SuiteResult:
    got = p.curve.leaf_lines()
    want = leaf_lines_from_weights(p.domain)
    bad = [g for g in got if Counter(got[g]) != Counter(want[g])]
    return SuiteResult("leaf_lines", not bad, {"mismatched_groups": bad})


def check_laplacian(p: Pipeline) -> SuiteResult:
    interior = [m for m in p.sub.vertices if -p.ell < m[0] < 0 and 0 < m[1] < p.k]
    bad = [list(m) for m in interior if laplacian_residual(p.sub, p.curve, p.dual.fstar, m) != 0]
    return SuiteResult("laplacian", not bad, {"interior_points": len(interior), "violations": bad})


def check_exactness(p: Pipeline) -> SuiteResult:
    rep = verify_exactness(p.primal.oneform, p.curve)
    return SuiteResult("exactness", rep.exact, rep.to_json())


def check_zero_count(p: Pipeline, samples: int = 200, seed: int = 0) -> SuiteResult:
    target = 2 * p.k * p.ell
    bad = []
    for u, v in random_points(p.k, p.ell, samples, seed):
        rep = classify_zeros(action_slopes(p.curve, p.primal, u, v), p.curve)
        total = 2 * rep.n_double + sum(rep.Z.values())
        if total != target:
            bad.append({"u": str(u), "v": str(v), "count": total})
    return SuiteResult("zero_count", not bad, {"samples": samples, "target": target, "violations": bad[:5]})


def check_psi(p: Pipeline) -> SuiteResult:
    images = vertex_map(p.curve, p.primal)  # raises if an image leaves the closed domain
    bad = []
    for t, lf in enumerate(p.curve.leaves):
        axis, val = leaf_side(lf.group, p.k, p.ell)
        if images[lf.vertex][axis] != val:
            bad.append({"leaf": t, "group": lf.group, "image": [str(c) for c in images[lf.vertex]]})
    return SuiteResult("psi_images", not bad, {"violations": bad})


def check_parallel(p: Pipeline) -> SuiteResult:
    bad = []
    for s in p.arctic.segments:
        a, b = s["a"], s["b"]
        eta = p.curve.bounded_edges[s["edge"]].eta
        if (b[0] - a[0]) * eta[1] - (b[1] - a[1]) * eta[0] != 0:
            bad.append(s["edge"])
    return SuiteResult("segments_parallel", not bad, {"violations": bad})


def check_geometry(p: Pipeline) -> SuiteResult:
    rep = verify_geometry(p.arctic, p.curve, p.primal)
    return SuiteResult("angles_orientation", rep.ok, rep.to_json())


def check_limit_shape(p: Pipeline, samples: int = 60, seed: int = 1) -> SuiteResult:
    bad = []
    for u, v in random_points(p.k, p.ell, samples, seed):
        ph = classify_point(p.curve, p.primal, u, v)
        if ph.mu is None:
            continue
        a = facet_height(p.dual, p.k, p.ell, ph.mu, u, v)
        b = path_height(p.curve, p.primal, u, v, default_path(p.curve, ph.mu))
        if a != b:
            bad.append({"u": str(u), "v": str(v), "facet": str(a), "path": str(b)})
    return SuiteResult("limit_shape_formulas", not bad, {"violations": bad[:5]})


def check_continuity(p: Pipeline) -> SuiteResult:
    bad = []
    for s in p.arctic.segments:
        se = p.sub.edges[p.curve.bounded_edges[s["edge"]].dual]
        for pt in (s["a"], s["b"]):
            h1 = facet_height(p.dual, p.k, p.ell, se.a, *pt)
            h2 = facet_height(p.dual, p.k, p.ell, se.b, *pt)
            if h1 != h2:
                bad.append(s["edge"])
    return SuiteResult("continuity", not bad, {"violations": sorted(set(bad))})


def _vertex_sums(graph, measure) -> list:
    bad = []
    for w in range(graph.n_vertices):
        refs = []
        for eid in graph.white_edges[w]:
            if eid in measure.edges:
                e = graph.edges[eid]
                refs.append(EdgeRef(e.i, e.j, e.type, 0, 0))
        s = sum((edge_probabilities(measure, [r]) for r in refs), Fraction(0))
        if s != 1:
            bad.append({"white": w, "sum": str(s)})
    for b in range(graph.n_vertices):
        refs = []
        for eid in sorted(measure.edges):
            e = graph.edges[eid]
            if e.black == b:
                refs.append(EdgeRef(e.i, e.j, e.type, -e.cross_v, -e.cross_u))
        s = sum((edge_probabilities(measure, [r]) for r in refs), Fraction(0))
        if s != 1:
            bad.append({"black": b, "sum": str(s)})
    return bad


def check_gibbs0(p: Pipeline) -> SuiteResult:
    bad = []
    checked = 0
    for mu in sorted(p.sub.vertices, key=lambda m: (m[1], m[0])):
        try:
            meas = gibbs_zero_measure(p.graph, maximizer_graph(p.table, mu))
        except TropazError as exc:
            bad.append({"mu": list(mu), "error": type(exc).__name__})
            continue
        checked += 1
        for item in _vertex_sums(p.graph, meas):
            bad.append({"mu": list(mu), **item})
        for comp in components(meas):
            if not comp.bounded:
                continue
            for ref, val in oracle_component_measure(p.graph, comp).items():
                got = edge_probabilities(meas, [ref])
                if got != val:
                    bad.append({"mu": list(mu), "edge": list(ref), "got": str(got), "oracle": str(val)})
    return SuiteResult("gibbs_zero", not bad, {"slopes": checked, "violations": bad[:5]})


def check_multiweb(p: Pipeline) -> SuiteResult:
    """Colour the union of two maximizers whose slopes average to a lattice point."""
    pts = sorted(p.sub.vertices, key=lambda m: (m[1], m[0]))
    bad, tried = [], 0
    for i, a in enumerate(pts):
        for b in pts[i:]:
            if (a[0] + b[0]) % 2 or (a[1] + b[1]) % 2:
                continue
            mid = ((a[0] + b[0]) // 2, (a[1] + b[1]) // 2)
            ca = p.table.entries[a].maximizers[0]
            cb = p.table.entries[b].maximizers[0]
            out = color_multiweb([ca, cb], p.graph)
            tried += 1
            union = Counter(ca.edges) + Counter(cb.edges)
            split = Counter()
            for c in out:
                split.update(c.edges)
            if split != union or any(c.mu != mid for c in out):
                bad.append({"a": list(a), "b": list(b)})
            elif mid in p.sub.vertices and a != b and ca.energy + cb.energy == 2 * p.table.estar(mid):
                if any(c.energy != p.table.estar(mid) for c in out):
                    bad.append({"a": list(a), "b": list(b), "reason": "not maximizers"})
    return SuiteResult("multiweb", not bad, {"pairs": tried, "violations": bad[:5]})


SUITES = [
    check_balancing,
    check_leaf_lines,
    check_laplacian,
    check_exactness,
    check_zero_count,
    check_psi,
    check_parallel,
    check_geometry,
    check_limit_shape,
    check_continuity,
    check_gibbs0,
    check_multiweb,
]


def run_checks(p: Pipeline, samples: int = 200) -> list:
    if not p.genericity.smooth:
        reason = "NotSmooth"
        return [SuiteResult("smoothness", False, p.genericity.to_json())] + [
            SuiteResult(f.__name__.removeprefix("check_"), True, skipped=reason) for f in SUITES
        ]
    out = [SuiteResult("smoothness", True, {})]
    for f in SUITES:
        try:
            out.append(f(p, samples=samples) if f is check_zero_count else f(p))
        except TropazError as exc:
            out.append(SuiteResult(f.__name__.removeprefix("check_"), False, {"error": f"{type(exc).__name__}: {exc}"}))
    return out
