import cmath
import math
from functools import reduce

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from dedekind.arith import cyclotomic_poly, euler_phi
from dedekind.invpoly import (
    CycResidue,
    DeflationRefused,
    InvPoly,
    SparsePoly,
    build_invpoly,
    cyclotomic_root_scan,
    eval_at_root,
    eval_numeric,
    explained_orders,
    is_root,
    root_multiplicity,
    structural_check,
    triple_deflate,
)


@pytest.mark.parametrize(
    "b, terms",
    [(3, {0: 1, 1: 1}), (5, {0: 1, 3: 2, 6: 1}), (7, {0: 1, 6: 2, 9: 2, 15: 1})],
)
def test_build_examples(b, terms):
    p = build_invpoly(b)
    assert p.terms == terms
    assert p.b == b and p.phi == euler_phi(b)


def test_build_matches_brute_force():
    for b in range(2, 40):
        assert build_invpoly(b).dense() == oracles.invpoly_dense(b)


def test_build_rejects_b_below_two():
    with pytest.raises(ValueError):
        build_invpoly(1)


def test_record_roundtrip():
    for b in (2, 3, 10, 37):
        p = build_invpoly(b)
        q = InvPoly.from_record(p.to_record())
        assert q == p


def test_sparse_poly_call_and_accessors():
    p = SparsePoly({0: 1, 3: 2, 6: 1})
    assert p.degree == 6 and p.coeff(3) == 2 and p.coeff(4) == 0
    assert p(2) == (1 + 8) ** 2
    assert list(p.exps) == [0, 3, 6] and list(p.coeffs) == [1, 2, 1]


# exact residues -------------------------------------------------------------

def test_residue_arithmetic_matches_complex():
    m = 12
    a = CycResidue.from_vector(m, [3, -1, 0, 2, 0, 0, 5, 0, 0, 0, 0, 1])
    b = CycResidue.zeta_power(m, 5) + CycResidue.constant(m, 2)
    for got, want in [
        (a + b, a.to_complex() + b.to_complex()),
        (a - b, a.to_complex() - b.to_complex()),
        (a * b, a.to_complex() * b.to_complex()),
        (-a, -a.to_complex()),
        (a * 3, 3 * a.to_complex()),
    ]:
        assert abs(got.to_complex() - want) < 1e-9


def test_residue_zero_and_constant():
    m = 5
    s = sum((CycResidue.zeta_power(m, j) for j in range(1, 5)), CycResidue.constant(m, 0))
    assert s.constant_term() == -1
    assert (s + CycResidue.constant(m, 1)).is_zero()
    assert CycResidue.zeta_power(m, 2)
    with pytest.raises(ValueError):
        CycResidue.constant(5, 1) + CycResidue.constant(7, 1)


@pytest.mark.parametrize("b, m, want", [(3, 2, 0), (9, 2, 6), (5, 6, 0)])
def test_eval_at_root_examples(b, m, want):
    assert eval_at_root(build_invpoly(b), m).constant_term() == want


@given(st.integers(2, 60), st.integers(1, 200))
@settings(max_examples=150, deadline=None)
def test_exact_and_float_evaluation_agree(b, m):
    p = build_invpoly(b)
    exact = eval_at_root(p, m).to_complex()
    float_ = oracles.eval_at_zeta(p.dense(), m)
    assert abs(exact - float_) < 1e-6
    assert abs(eval_numeric(p, m) - float_) < 1e-6


@given(st.integers(2, 80), st.integers(1, 240))
@settings(max_examples=200, deadline=None)
def test_root_iff_multiplicity_positive(b, m):
    p = build_invpoly(b)
    assert is_root(p, m) == (root_multiplicity(p, m) >= 1)
    assert is_root(p, m) == eval_at_root(p, m).is_zero()


@pytest.mark.parametrize("b, m, want", [(5, 2, 2), (5, 6, 2), (3, 2, 1), (7, 2, 1), (9, 2, 0)])
def test_root_multiplicity_examples(b, m, want):
    assert root_multiplicity(build_invpoly(b), m) == want


def test_root_multiplicity_matches_dense_division():
    for b in range(2, 41):
        p = build_invpoly(b)
        dense = p.dense()
        for m in range(1, 3 * b + 1):
            assert root_multiplicity(p, m) == oracles.multiplicity(dense, m), (b, m)


def test_multiplicity_cap():
    p = SparsePoly({e: c for e, c in enumerate(reduce(oracles.pmul, [[1, 1]] * 6))})
    assert root_multiplicity(p, 2, cap=4) == 4
    assert root_multiplicity(p, 2, cap=8) == 6


# root scan ------------------------------------------------------------------

def test_scan_f5():
    rep = cyclotomic_root_scan(build_invpoly(5), m_max=15)
    assert rep.found == [(2, 2), (6, 2)]
    assert rep.unexplained == []
    assert rep.residual_degree == 6 - 2 * 1 - 2 * 2


def test_scan_f8_finds_18():
    rep = cyclotomic_root_scan(build_invpoly(8), m_max=24)
    assert 18 in rep.unexplained_orders()
    assert rep.m_max == 24


def test_scan_f22():
    rep = cyclotomic_root_scan(build_invpoly(22))
    assert rep.m_max == 66
    assert {20, 60} <= set(rep.unexplained_orders())


def test_scan_is_exact_against_dense_division():
    for b in (8, 18, 22, 29):
        p = build_invpoly(b)
        rep = cyclotomic_root_scan(p)
        dense = p.dense()
        for m, t in rep.found:
            phi_m = list(cyclotomic_poly(m).coeffs)
            q = dense
            for _ in range(t):
                q, r = oracles.pdivmod(q, phi_m)
                assert not any(r)
            _, r = oracles.pdivmod(q, phi_m)
            assert any(r)
        missing = [m for m in range(1, 3 * b + 1) if m not in rep.orders()]
        for m in missing:
            assert oracles.multiplicity(dense, m) == 0


def test_scan_record_fields():
    rec = cyclotomic_root_scan(build_invpoly(8)).to_record()
    assert set(rec) == {"b", "m_max", "mult_cap", "found", "explained", "unexplained", "cap_hit",
                        "residual_degree"}


def test_explained_orders():
    assert explained_orders(5) == {2, 10, 6, 30}


# structure ------------------------------------------------------------------

@pytest.mark.parametrize("b", [7, 9, 10])
def test_structural_examples(b):
    results = structural_check(build_invpoly(b))
    assert all(r.passed for r in results), [r for r in results if not r.passed]


def test_structural_values_at_minus_one():
    assert eval_at_root(build_invpoly(9), 2).constant_term() == 6
    assert eval_at_root(build_invpoly(10), 2).constant_term() == 4
    assert any(r.name == "even_exponents" for r in structural_check(build_invpoly(10)))


def test_structural_detects_damage():
    p = build_invpoly(11)
    terms = dict(p.terms)
    terms[1] = 1
    broken = InvPoly(terms, b=11, phi=p.phi)
    failed = {r.name for r in structural_check(broken) if not r.passed}
    assert {"palindrome", "coefficient_sum", "exponents_divisible_by_3"} <= failed


@pytest.mark.parametrize("b, want", [(5, {0: 1, 1: 2, 2: 1}), (7, {0: 1, 2: 2, 3: 2, 5: 1})])
def test_triple_deflate(b, want):
    assert triple_deflate(build_invpoly(b)).terms == want


def test_triple_deflate_refuses():
    with pytest.raises(DeflationRefused) as e:
        triple_deflate(build_invpoly(6))
    assert e.value.witness == 10


def test_deflated_value_relation():
    p = build_invpoly(13)
    g = triple_deflate(p)
    x = 0.7 + 0.2j
    assert abs(g(x**3) - p(x)) < 1e-9 * abs(p(x))


def test_even_exponents_when_b_is_2_mod_4():
    for b in range(6, 120, 4):
        assert all(e % 2 == 0 for e in build_invpoly(b).terms)


def test_eval_numeric_reduces_exponents():
    p = build_invpoly(21)
    for m in (2, 7, 42, 63):
        want = sum(c * cmath.exp(2j * math.pi * e / m) for e, c in p.terms.items())
        assert abs(eval_numeric(p, m) - want) < 1e-8
    assert np.isclose(eval_numeric(p, 1).real, euler_phi(21))
