import pytest
from hypothesis import given
from hypothesis import strategies as st

from lichnerowicz import harmonic
from lichnerowicz import spectrum as sp
from lichnerowicz.harmonic import Kind, RegimeError, in_S0, in_S1


def contributors(lines):
    return {(l.eigenvalue, str(c.tag.kind), c.tag.k, c.tag.l, c.tag.q): c.dim for l in lines for c in l.contributors}


@given(st.integers(2, 6), st.integers(0, 6))
def test_sym_eigenvalue_low_orders(n, k):
    assert sp.sym_eigenvalue(n, 0, k, 0, 0) == k * (n + k - 1)
    if in_S0(1, k, 0, 1) or in_S1(1, k, 0, 1):
        assert sp.sym_eigenvalue(n, 1, k, 0, 1) == (k + 1) * (n + k - 2)
        assert sp.sym_eigenvalue(n, 1, k, 0, 1) == sp.form_eigenvalue("coexact", n, 1, k)


def test_sym_eigenvalue_direct_evaluation():
    assert sp.sym_eigenvalue(3, 2, 2, 0, 2) == 12
    assert sp.sym_eigenvalue(4, 2, 0, 0, 0) == 10
    assert sp.sym_eigenvalue(4, 2, 0, 1, 0) == 0


def test_sym_eigenvalue_rejects_out_of_regime():
    with pytest.raises(RegimeError):
        sp.sym_eigenvalue(3, 1, 0, 0, 1)
    with pytest.raises(RegimeError):
        sp.sym_eigenvalue(3, 2, 1, 2, 0)


def test_sym_spectrum_functions():
    assert sp.lines_signature(sp.sym_spectrum(3, 0, 2)) == [(0, 1, True), (3, 4, True), (8, 9, True)]


def test_sym_spectrum_examples():
    c = contributors(sp.sym_spectrum(3, 1, 1))
    assert c[(4, "V", 1, 0, 1)] == 6
    c = contributors(sp.sym_spectrum(4, 2, 0))
    assert c[(10, "V", 0, 0, 0)] == 14
    assert c[(0, "V", 0, 1, 0)] == 1


def test_sym_spectrum_needs_n3():
    with pytest.raises(ValueError):
        sp.sym_spectrum(2, 1, 2)


@pytest.mark.parametrize("n,p,k_max", [(3, 1, 3), (3, 2, 3), (4, 2, 2), (3, 3, 2)])
def test_sym_lines_are_consistent(n, p, k_max):
    lines = sp.sym_spectrum(n, p, k_max)
    assert [l.eigenvalue for l in lines] == sorted({l.eigenvalue for l in lines})
    for line in lines:
        assert line.multiplicity >= 1
        for c in line.contributors:
            assert sp.sym_eigenvalue(n, p, c.tag.k, c.tag.l, c.tag.q) == line.eigenvalue
            assert c.dim == harmonic.dim_formula(c.tag)


@pytest.mark.parametrize("n,p,K", [(3, 0, 4), (3, 1, 3), (3, 2, 3), (4, 2, 2), (3, 3, 2)])
def test_sym_completeness_at_cutoff(n, p, K):
    total = sum(c.dim for l in sp.sym_spectrum(n, p, K) for c in l.contributors)
    assert total == sum(harmonic.hdelta_dim(n, p, k) for k in range(K + 1))


def test_computed_dims_agree_with_closed():
    closed = sp.sym_spectrum(3, 2, 2)
    computed = sp.sym_spectrum(3, 2, 2, computed=True)
    assert sp.lines_signature(closed) == sp.lines_signature(computed)
    assert {c.source for l in computed for c in l.contributors} == {"computed"}


def test_truncation_flags_incomplete_lines():
    # n=3, p=1: the exact family at degree k has the coexact eigenvalue of degree k+1 beside it
    lines = sp.forms_spectrum(3, 1, 2)
    assert sp.lines_signature(lines) == [(3, 4, True), (4, 6, True), (8, 9, True), (9, 16, True), (15, 16, True)]
    lines = sp.forms_spectrum(2, 1, 3)
    assert [l.complete for l in lines] == [True, True, True, False]


def test_forms_spectrum_functions():
    lines = sp.forms_spectrum(3, 0, 4)
    assert sp.lines_signature(lines) == [(k * (k + 2), (k + 1) ** 2, True) for k in range(5)]
    assert sp.lines_signature(sp.forms_spectrum(2, 0, 0)) == [(0, 1, True)]


def test_forms_spectrum_coexact_example():
    lines = {l.eigenvalue: l for l in sp.forms_spectrum(3, 1, 1)}
    coexact = [c for c in lines[4].contributors if c.family == "coexact"]
    assert [(c.tag.k, c.dim) for c in coexact] == [(1, 6)]


def test_forms_merged_family():
    # n = 2p: coexact at degree k+1 with exact at degree k share (k+p)(k+p+1)
    for line in sp.forms_spectrum(2, 1, 3):
        assert line.formula_multiplicity is not None
        if line.complete:
            assert line.formula_multiplicity == line.multiplicity and not line.mismatch
    assert [l.eigenvalue for l in sp.forms_spectrum(2, 1, 3)] == [2, 6, 12, 20]


def test_forms_spectrum_validation():
    with pytest.raises(ValueError):
        sp.forms_spectrum(3, 4, 1)
    with pytest.raises(ValueError):
        sp.form_eigenvalue("mixed", 3, 1, 1)


@pytest.mark.parametrize("n", [3, 4])
def test_one_tensors_are_one_forms(n):
    assert sp.lines_signature(sp.sym_spectrum(n, 1, 4)) == sp.lines_signature(sp.forms_spectrum(n, 1, 4))


# -- n = 2 --------------------------------------------------------------------------------


def test_n2_formula_values():
    assert [sp.n2_lambda(0, k, 0) for k in range(4)] == [0, 2, 6, 12]
    assert [sp.n2_formula_multiplicity(0, k, 0) for k in range(4)] == [2, 6, 10, 14]
    assert sp.n2_lambda(1, 1, 0) == 6 and sp.n2_formula_multiplicity(1, 1, 0) == 10
    assert sp.n2_lambda(2, 0, 1) == 0


def test_n2_functions_flag_formula():
    lines = sp.n2_spectrum(0, 3)
    assert [(l.eigenvalue, l.multiplicity) for l in lines] == [(k * (k + 1), 2 * k + 1) for k in range(4)]
    assert all(l.mismatch and l.formula_multiplicity == 2 * l.multiplicity for l in lines)


@pytest.mark.parametrize("p,flagged", [(0, True), (1, False), (2, True), (3, False)])
def test_n2_mismatch_pattern(p, flagged):
    for line in sp.n2_spectrum(p, 2):
        assert line.mismatch == (line.formula_multiplicity != line.multiplicity)
        assert line.mismatch == flagged


def test_n2_examples():
    lines = {l.eigenvalue: l for l in sp.n2_spectrum(1, 1)}
    assert lines[6].multiplicity == 10 and lines[6].formula_multiplicity == 10
    lines = {l.eigenvalue: l for l in sp.n2_spectrum(2, 0)}
    assert lines[0].multiplicity >= 1
    assert [str(c.tag.kind) for c in lines[0].contributors] == ["V"]


def test_n2_relabelled_and_skipped():
    tags, relabelled, skipped = sp.n2_eigenspace_tags(0, 0, 0)
    assert skipped == ["V(k=1,q=1,l=0)"] and not relabelled
    assert [(t.kind, t.k, t.q) for t in tags] == [(Kind.V, 0, 0)]
    tags, relabelled, skipped = sp.n2_eigenspace_tags(1, 1, 0)
    assert relabelled == ["V(k=2,q=1,l=0) -> W"] and not skipped
    for t in tags:
        assert in_S0(1, t.k, t.l, t.q) if t.kind is Kind.V else in_S1(1, t.k, t.l, t.q)


@pytest.mark.parametrize("p", range(4))
def test_n2_lines_are_consistent(p):
    for line in sp.n2_spectrum(p, 3):
        assert line.regime is sp.Regime.SymmetricN2
        for c in line.contributors:
            assert sp.sym_eigenvalue(2, p, c.tag.k, c.tag.l, c.tag.q) == line.eigenvalue
            assert c.source == "computed"


@pytest.mark.parametrize("p", range(4))
def test_n2_consistency_per_degree(p):
    for d, (total, closed) in sp.n2_consistency(p, 3).items():
        assert total == closed


def test_line_serialisation():
    line = sp.n2_spectrum(0, 0)[0]
    d = line.to_dict()
    assert d["eigenvalue"] == 0 and d["multiplicity"] == 1
    assert d["formula_multiplicity"] == 2 and d["mismatch"] is True
    assert d["skipped"] == ["V(k=1,q=1,l=0)"]
    d = sp.sym_spectrum(3, 0, 0)[0].to_dict()
    assert "formula_multiplicity" not in d
    assert d["contributors"] == [{"kind": "V", "k": 0, "l": 0, "q": 0, "dim": 1, "source": "closed", "family": None}]
