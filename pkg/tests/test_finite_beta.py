import math
from fractions import Fraction as Fr

import gmpy2
import pytest

from tropaz.errors import ConfigError, EmptyComponentInterior, NearZeroOnTorus, ValidationError
from tropaz.finite_beta import (
    QuadratureSpec,
    anchor_point,
    char_poly_beta,
    gibbs_beta_marginal,
    precision_bits,
    ronkin,
    surface_tension_beta,
)
from tropaz.lattice import EdgeRef, uniform_domain
from tropaz.newton import eval_tropical_poly
from tropaz.pipeline import Pipeline

SPEC = QuadratureSpec(64, 256)


def mp(q):
    q = Fr(q)
    return gmpy2.mpq(q.numerator, q.denominator)


def test_precision_bits(monkeypatch):
    monkeypatch.delenv("TROPAZ_PRECISION_BITS", raising=False)
    assert precision_bits() == 256
    monkeypatch.setenv("TROPAZ_PRECISION_BITS", "128")
    assert precision_bits() == 128
    assert precision_bits(300) == 300
    monkeypatch.setenv("TROPAZ_PRECISION_BITS", "lots")
    with pytest.raises(ConfigError):
        precision_bits()
    with pytest.raises(ConfigError):
        precision_bits(8)


def test_env_precision_reaches_results(monkeypatch, ex1):
    monkeypatch.setenv("TROPAZ_PRECISION_BITS", "96")
    r = ronkin(char_poly_beta(ex1.graph), 2, 5, 5, QuadratureSpec(16))
    assert r.bits == 96
    assert r.value.precision == 96


def test_nodes_must_be_power_of_two():
    with pytest.raises(ValidationError):
        QuadratureSpec(100)
    with pytest.raises(ValidationError):
        QuadratureSpec(8)


def test_ex1_char_poly(ex1):
    terms = sorted(char_poly_beta(ex1.graph).terms, key=lambda t: t[2])
    # 1 + e^beta z^-1 + z^-1 w - w
    assert terms == [(1, 1, (-1, 0)), (1, 0, (-1, 1)), (1, 0, (0, 0)), (-1, 0, (0, 1))]


def test_ronkin_dominance(ex1):
    r = ronkin(char_poly_beta(ex1.graph), 10, 5, 5, SPEC)
    assert abs(r.value / 10 - 5) < 1e-6


def test_uniform_dominance_bound():
    p = Pipeline(uniform_domain(1, 1))
    cs = char_poly_beta(p.graph)
    beta, x, y = 1, 5, 5
    top, _ = eval_tropical_poly(p.table.estar_map(), x, y)
    r = ronkin(cs, beta, x, y, SPEC)
    # one dominant monomial: |R - beta P_t| <= log(1 + sum of the others / dominant)
    bound = math.log1p(2 * math.exp(-beta * 5) + math.exp(-beta * 10))
    assert abs(float(r.value) - beta * float(top)) <= bound


def test_ronkin_on_curve_rejected(ex1):
    with pytest.raises(NearZeroOnTorus):
        ronkin(char_poly_beta(ex1.graph), 4, 1, 0, SPEC)


def test_anchor_points(ex1, g22):
    assert anchor_point(ex1.sub, (-1, 0)) == (Fr(-1, 2), Fr(-1, 2))
    for p in (ex1, g22):
        for mu in p.sub.vertices:
            _, arg = eval_tropical_poly(p.sub.estar, *anchor_point(p.sub, mu))
            assert arg == {mu}
    with pytest.raises(EmptyComponentInterior):
        anchor_point(ex1.sub, (-5, 0))


def tension_error(p, mu, beta, spec=SPEC):
    r = surface_tension_beta(char_poly_beta(p.graph), p.sub, mu, beta, spec, estimate_error=False)
    with gmpy2.context(precision=256):
        return abs(r.sigma / beta + mp(p.table.estar(mu)))


def test_ex1_tension(ex1):
    errs = [tension_error(ex1, (-1, 0), b) for b in (2, 5, 10)]
    assert errs[-1] < 0.05
    assert errs[0] >= errs[1] >= errs[2]
    assert tension_error(ex1, (0, 0), 10) < 0.05


def test_two_maximizers_leave_entropy(twomax):
    # two maximizing covers contribute log 2 to the Ronkin function
    for beta, tol in [(2, 1e-5), (5, 1e-12), (10, 1e-12)]:
        err = tension_error(twomax, (-1, 1), beta)
        assert abs(float(err) - math.log(2) / beta) < tol


def test_ex1_gibbs_beta(ex1):
    xy = anchor_point(ex1.sub, (-1, 0))
    south = [EdgeRef(0, 0, "S", 0, 0)]
    assert abs(gibbs_beta_marginal(ex1.graph, south, xy, 8, SPEC).value - 1) < 1e-2
    assert abs(gibbs_beta_marginal(ex1.graph, south, xy, 12, SPEC).value - 1) < 1e-3


def test_gibbs_beta_marginals_sum_to_one(g22):
    xy = anchor_point(g22.sub, (-1, 1))
    total = 0
    for t in "WSEN":
        total += gibbs_beta_marginal(g22.graph, [EdgeRef(0, 0, t, 0, 0)], xy, 2, SPEC).value
    assert abs(total - 1) < 1e-40


def test_gibbs_beta_node_refinement(twomax):
    xy = (Fr(4, 3), Fr(14, 3))
    edge = [EdgeRef(1, 0, "S", 0, 0)]
    a = gibbs_beta_marginal(twomax.graph, edge, xy, 4, QuadratureSpec(32, 256)).value
    b = gibbs_beta_marginal(twomax.graph, edge, xy, 4, QuadratureSpec(64, 256)).value
    assert abs(a - b) < 1e-10
