import random
from fractions import Fraction
from itertools import permutations, product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import tensors
from lichnerowicz.formcalc import FormTensor, form_correction
from lichnerowicz.qpoly import HomoPoly
from lichnerowicz.symcalc import SymTensor, sym_correction, metric
from lichnerowicz.tensorcalc import (CoordSpace, GenTensor, TensorError, correction_O, covar_D, diverg,
                                     flat_delta, interior_radial, lie_radial, operator_matrix, permute,
                                     random_tensor, tangential, general_correction, trace_slots,
                                     transposition)


def x(n, i):
    return HomoPoly.var(n + 1, i)


def one(n):
    return HomoPoly.const(n + 1, 1)


def gen(n, p, comps):
    return GenTensor(n, p, next(iter(comps.values())).degree, comps)


def test_covar_D_examples():
    n = 2
    T = gen(n, 1, {(0,): x(n, 1)})
    assert covar_D(T).comps == {(1, 0): one(n)}
    assert covar_D(gen(n, 1, {(0,): one(n)})).is_zero()
    assert covar_D(gen(n, 1, {(0,): x(n, 0)})).comps == {(0, 0): one(n)}


def test_diverg_examples():
    n = 2
    assert diverg(gen(n, 1, {(0,): x(n, 0)})).comps == {(): HomoPoly.const(3, -1)}
    assert diverg(gen(n, 1, {(0,): x(n, 1)})).is_zero()
    assert diverg(gen(n, 2, {(1, 2): x(n, 0)})).is_zero()
    with pytest.raises(TensorError):
        diverg(GenTensor.from_poly(x(n, 0)))


def test_flat_delta_examples():
    n = 2
    T = gen(n, 1, {(0,): x(n, 0) * x(n, 0)})
    assert flat_delta(T).comps == {(0,): HomoPoly.const(3, -2)}
    assert flat_delta(gen(n, 1, {(2,): x(n, 0) * x(n, 0) - x(n, 1) * x(n, 1)})).is_zero()


def test_interior_radial_and_trace_examples():
    n = 2
    assert interior_radial(gen(n, 1, {(0,): one(n)})).comps == {(): x(n, 0)}
    assert interior_radial(gen(n, 2, {(0, 1): one(n)}), 1).comps == {(0,): x(n, 1)}
    g = metric(n).as_gen()
    assert trace_slots(g, 0, 1).comps == {(): HomoPoly.const(3, 3)}
    assert trace_slots(gen(n, 2, {(0, 1): one(n)}), 0, 1).is_zero()
    with pytest.raises(TensorError):
        trace_slots(g, 1, 0)
    with pytest.raises(TensorError):
        interior_radial(g, 2)


def test_permute_examples():
    n = 2
    T = gen(n, 2, {(0, 1): one(n)})
    assert permute(T, (1, 0)).comps == {(1, 0): one(n)}
    assert permute(T, (0, 1)) == T
    with pytest.raises(TensorError):
        permute(T, (0, 0))


@given(st.integers(1, 2), st.integers(2, 3), st.integers(0, 2), st.integers(0, 2**31))
def test_permute_matches_definition(n, p, k, seed):
    T = random_tensor(GenTensor, n, p, k, random.Random(seed), density=0.3)
    for sigma in permutations(range(p)):
        S = permute(T, sigma)
        for idx in product(range(n + 1), repeat=p):
            assert S.component(idx) == T.component(tuple(idx[s] for s in sigma))


def test_lie_radial_examples():
    n = 2
    assert lie_radial(gen(n, 1, {(0,): one(n)})) == gen(n, 1, {(0,): one(n)})
    f = GenTensor.from_poly(x(n, 0) * x(n, 1))
    assert lie_radial(f) == f.scale(2)
    T = gen(n, 2, {(0, 2): x(n, 1)})
    assert lie_radial(T) == T.scale(3)


def test_correction_O_examples():
    n = 2
    assert correction_O(gen(n, 1, {(0,): one(n)})) == gen(n, 1, {(0,): HomoPoly.const(3, -2)})
    assert correction_O(GenTensor.from_poly(x(n, 0))).is_zero()
    # on the metric: 2 (n+1) g from the trace term, minus 2 * 2 g from the radial term
    g = metric(n).as_gen()
    assert correction_O(g) == g.scale(2 * (n + 1) - 4)


@given(tensors(GenTensor, max_p=2, max_k=3))
def test_divergence_of_derivative_is_flat_laplacian(T):
    assert diverg(covar_D(T)) == flat_delta(T)


@given(tensors(SymTensor))
def test_general_correction_specialises_to_symmetric(T):
    assert general_correction(T) == sym_correction(T).as_gen()


@given(tensors(FormTensor))
def test_general_correction_specialises_to_forms(T):
    assert general_correction(T) == form_correction(T).as_gen()


@given(tensors(GenTensor, max_p=2, max_k=2))
def test_tangential_kills_radial_slots(T):
    P = tangential(T)
    for j in range(T.p):
        assert interior_radial(P, j).is_zero()


def test_tensor_validation():
    n = 1
    with pytest.raises(TensorError):
        SymTensor(n, 2, 0, {(1, 0): one(n)})
    with pytest.raises(TensorError):
        FormTensor(n, 2, 0, {(0, 0): one(n)})
    with pytest.raises(TensorError):
        GenTensor(n, 1, 0, {(2,): one(n)})
    with pytest.raises(TensorError):
        GenTensor(n, 1, 1, {(0,): one(n)})
    with pytest.raises(TensorError):
        SymTensor.zero(n, 1, 0) + FormTensor.zero(n, 1, 0)


def test_degenerate_shapes_are_zero():
    T = GenTensor.from_poly(HomoPoly.const(3, 1))
    assert covar_D(T).is_zero() and covar_D(T).k == -1
    assert SymTensor.zero(2, -1, 0).is_zero()


@given(st.sampled_from([GenTensor, SymTensor, FormTensor]), st.integers(1, 2), st.integers(0, 3),
       st.integers(0, 2), st.integers(0, 2**31))
def test_coordinates_round_trip(cls, n, p, k, seed):
    T = random_tensor(cls, n, p, k, random.Random(seed), density=0.5)
    space = CoordSpace(cls, n, p, k)
    assert space.to_tensor(space.to_vector(T)) == T


@given(tensors(SymTensor, n=2, p=2, k=2), tensors(SymTensor, n=2, p=2, k=2))
def test_operator_matrix_is_linear_action(S, T):
    m, src, tgt = operator_matrix(flat_delta, SymTensor, 2, 2, 2)
    vec = src.to_vector(S + T.scale(Fraction(2, 3)))
    assert tgt.to_tensor(m.matvec(vec)) == flat_delta(S) + flat_delta(T).scale(Fraction(2, 3))


def test_transposition():
    assert transposition(3, 0, 2) == (2, 1, 0)
