from fractions import Fraction

import pytest

from tropaz.kirchhoff import (
    boundary_value,
    laplacian_residual,
    linear_oneform,
    reconstruct_fstar,
    residues,
    verify_exactness,
)

from conftest import pipeline

SMOOTH = ["ex1", "ex1_swapped", "generic22", "twomax22", "degenerate22"]


def test_ex1_fstar(ex1):
    fs = ex1.dual.fstar
    assert [fs[m] for m in [(0, 0), (0, 1), (-1, 0), (-1, 1)]] == [0, 0, 1, 0]


def test_ex1_face_gradients(ex1):
    grads = {tuple(sorted(ex1.sub.faces[t].vertices)): g for t, g in ex1.dual.gradients.items()}
    assert grads[((-1, 0), (0, 0), (0, 1))] == (-1, 0)
    assert grads[((-1, 0), (-1, 1), (0, 1))] == (0, -1)


def test_ex1_primal(ex1):
    assert ex1.primal.oneform.edge[0] == 1
    assert ex1.primal.vertex_grad == [(0, 1), (-1, 0)]


def test_ex1_exact(ex1):
    rep = verify_exactness(ex1.primal.oneform, ex1.curve)
    assert rep.exact
    assert rep.cycle_integrals == []
    assert rep.residue_sum == 0


def test_residues_sum_to_zero():
    for k, ell in [(1, 1), (2, 3), (4, 2)]:
        r = residues(k, ell)
        assert k * r["L1"] + ell * r["L2"] + k * r["L3"] + ell * r["L4"] == 0


def test_boundary_values():
    assert boundary_value((0, 1), 2, 2) == 0
    assert boundary_value((-1, 0), 2, 2) == 2
    assert boundary_value((-2, 1), 2, 2) == 2
    assert boundary_value((-1, 1), 2, 2) is None


@pytest.mark.parametrize("name", SMOOTH)
def test_laplacian_vanishes_inside(name):
    p = pipeline(name)
    inner = [m for m in p.sub.vertices if -p.ell < m[0] < 0 and 0 < m[1] < p.k]
    for m in inner:
        assert laplacian_residual(p.sub, p.curve, p.dual.fstar, m) == 0


@pytest.mark.parametrize("name", SMOOTH)
def test_boundary_data_respected(name):
    p = pipeline(name)
    for m, val in p.dual.fstar.items():
        b = boundary_value(m, p.k, p.ell)
        if b is not None:
            assert val == b


def test_generic_cycles_vanish(g22):
    rep = verify_exactness(g22.primal.oneform, g22.curve)
    assert rep.cycle_integrals
    assert all(c == 0 for c in rep.cycle_integrals)
    assert rep.exact


@pytest.mark.parametrize("name", SMOOTH)
def test_reconstruction_recovers_fstar(name):
    p = pipeline(name)
    base = (0, p.k)
    rec = reconstruct_fstar(p.primal.oneform, p.curve, base=base, base_value=p.dual.fstar[base])
    assert rec == p.dual.fstar


def test_linear_form_is_closed(g22):
    # a linear 1-form dF(eta) = a*eta_x + b*eta_y always balances and closes
    form = linear_oneform(g22.curve, Fraction(1, 3), Fraction(-2))
    rep = verify_exactness(form, g22.curve)
    assert rep.balancing_defects == []
    assert all(c == 0 for c in rep.cycle_integrals)
