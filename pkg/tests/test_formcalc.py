import pytest
from hypothesis import given

from conftest import tensors
from lichnerowicz import formcalc as fc
from lichnerowicz.formcalc import FormTensor
from lichnerowicz.harmonic import build_forms_space
from lichnerowicz.qlinalg import image
from lichnerowicz.qpoly import HomoPoly
from lichnerowicz.tensorcalc import covar_D, diverg, flat_delta, interior_radial

forms = tensors(FormTensor)


def x(n, i):
    return HomoPoly.var(n + 1, i)


def c(n, v):
    return HomoPoly.const(n + 1, v)


def test_exterior_derivative_examples():
    n = 2
    assert fc.ext_d(FormTensor.from_poly(x(n, 0))).comps == {(0,): c(n, 1)}
    assert fc.ext_d(FormTensor(n, 1, 1, {(0,): x(n, 1)})).comps == {(0, 1): c(n, -1)}


def test_coderivative_and_radial_examples():
    n = 2
    assert fc.form_delta(FormTensor(n, 1, 1, {(0,): x(n, 0)})).comps == {(): c(n, -1)}
    a = FormTensor(n, 2, 0, {(0, 1): c(n, 1)})
    assert fc.form_ir(a).comps == {(0,): -x(n, 1), (1,): x(n, 0)}


def test_cartan_example():
    n = 2
    a = FormTensor(n, 1, 1, {(1,): x(n, 0)})
    assert fc.cartan_lie(a) == a.scale(2)


def test_omega_examples():
    n = 2
    rot = FormTensor(n, 1, 1, {(0,): x(n, 1), (1,): -x(n, 0)})
    assert fc.omega_proj(rot) == rot
    exact = fc.ext_d(FormTensor.from_poly(x(n, 0) * x(n, 1)))
    assert fc.omega_proj(exact).is_zero()
    with pytest.raises(ValueError):
        fc.omega_proj(FormTensor.from_poly(c(n, 1)))


def test_omega_idempotent_on_harmonic_basis():
    split = build_forms_space(2, 1, 2)
    for a in split.whole.basis_tensors:
        w = fc.omega_proj(a)
        assert fc.omega_proj(w) == w
    # image of omega is the radial kernel, its kernel the exact part
    assert image(split.omega_matrix) == split.ker_ir.subspace
    assert split.whole.dim == split.ker_ir.dim + split.exact.dim


@given(forms)
def test_d_squared_and_delta_squared_vanish(a):
    assert fc.ext_d(fc.ext_d(a)).is_zero()
    assert fc.form_delta(fc.form_delta(a)).is_zero()


@given(forms)
def test_hodge_de_rham_flat(a):
    assert flat_delta(a) == fc.ext_d(fc.form_delta(a)) + fc.form_delta(fc.ext_d(a))


@given(forms)
def test_cartan_formula(a):
    assert fc.cartan_lie(a) == fc.lie_radial(a) == a.scale(a.p + a.k)


@given(forms)
def test_embedding_round_trip(a):
    assert fc.antisymmetrize(a.as_gen()) == a


@given(forms)
def test_d_is_alternated_derivative(a):
    assert fc.ext_d(a) == fc.antisymmetrize(covar_D(a.as_gen())).scale(a.p + 1)


@given(forms)
def test_form_ops_agree_with_general(a):
    if a.p >= 1:
        assert fc.form_delta(a).as_gen() == diverg(a.as_gen())
        assert fc.form_ir(a).as_gen() == interior_radial(a.as_gen(), 0)


@given(forms)
def test_omega_projects_onto_radial_kernel(a):
    if a.p + a.k == 0:
        return
    w = fc.omega_proj(a)
    assert fc.omega_proj(w) == w
    assert fc.form_ir(w).is_zero() or a.p == 0
