import math
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from dedekind.arith import divisors, euler_phi
from dedekind.conjectures import conj21_predict
from dedekind.invpoly import build_invpoly, is_root
from dedekind.kloosterman import (
    CapabilityError,
    KloostermanParams,
    kloosterman_exact,
    kloosterman_float,
    prop25_case,
    verify_prop25,
)


@pytest.mark.parametrize(
    "a, b, m, want",
    [(0, 0, 7, 6), (1, 1, 2, 1.0), (1, 1, 5, 2 + 2 * math.cos(4 * math.pi / 5))],
)
def test_float_examples(a, b, m, want):
    assert abs(kloosterman_float(a, b, m) - want) < 1e-12


@pytest.mark.parametrize("a, b, m, want", [(0, 0, 6, 2), (1, 1, 2, 1), (1, 0, 5, -1)])
def test_exact_examples(a, b, m, want):
    assert kloosterman_exact(a, b, m).constant_term() == want


def test_modulus_validation():
    with pytest.raises(ValueError):
        kloosterman_float(1, 1, 1)
    assert KloostermanParams(-1, 9, 4) == KloostermanParams(3, 1, 4)


def test_exact_ceiling():
    with pytest.raises(CapabilityError):
        kloosterman_exact(1, 1, 4099, ceiling=100)


@given(st.integers(-50, 50), st.integers(-50, 50), st.integers(2, 150))
@settings(max_examples=150, deadline=None)
def test_matches_direct_sum(a, b, m):
    assert abs(kloosterman_float(a, b, m) - oracles.kloosterman(a, b, m)) < 1e-9 * max(1, euler_phi(m))


@given(st.integers(-50, 50), st.integers(-50, 50), st.integers(2, 150))
@settings(max_examples=150, deadline=None)
def test_symmetric_and_real(a, b, m):
    k = kloosterman_float(a, b, m)
    assert abs(k - kloosterman_float(b, a, m)) < 1e-9 * euler_phi(m)
    assert abs(k.imag) <= 1e-9 * euler_phi(m)


@given(st.integers(-30, 30), st.integers(-30, 30), st.integers(2, 60))
@settings(max_examples=80, deadline=None)
def test_exact_agrees_with_float(a, b, m):
    assert abs(kloosterman_exact(a, b, m).to_complex() - kloosterman_float(a, b, m)) < 1e-9 * euler_phi(m)


@given(st.integers(1, 40), st.integers(-20, 20), st.integers(-20, 20), st.integers(2, 60))
@settings(max_examples=100, deadline=None)
def test_twisting_by_a_unit(u, a, b, m):
    # K(au, b u^-1, m) = K(a, b, m) for any unit u
    if gcd(u, m) != 1:
        return
    ui = pow(u, -1, m)
    assert (kloosterman_exact(a * u, b * ui, m) - kloosterman_exact(a, b, m)).is_zero()


def test_case_filter():
    assert prop25_case(8, 2) == "c0"
    assert prop25_case(12, 2) == "c2"
    assert prop25_case(9, 3) is None
    assert prop25_case(6, 3) is None  # c = 2 but k odd
    with pytest.raises(ValueError):
        prop25_case(9, 2)


@pytest.mark.parametrize("b, k", [(8, 2), (12, 2)])
def test_examples_hold(b, k):
    res = verify_prop25(b, k, exact=True)
    assert res.applicable and res.passed and res.exact
    assert res.error <= 1e-8


def test_not_applicable_record():
    rec = verify_prop25(9, 3).to_record()
    assert rec == {"b": 9, "k": 3, "case": "not-applicable"}


def test_unknown_form():
    with pytest.raises(ValueError):
        verify_prop25(8, 2, form="other")


def test_lhs_is_f_at_zeta_2k():
    b, k = 24, 6
    res = verify_prop25(b, k)
    want = oracles.eval_at_zeta(build_invpoly(b).dense(), 2 * k)
    assert abs(res.lhs - want) < 1e-8


def test_both_forms_agree_unless_c_is_2_mod_8():
    for b in range(4, 120):
        for k in divisors(b):
            c = b // k
            if prop25_case(b, k) and c % 8 in (0, 4, 6):
                a = verify_prop25(b, k, form="unit-i")
                c_ = verify_prop25(b, k, form="phase")
                assert abs(a.rhs - c_.rhs) < 1e-9 * max(1, euler_phi(b))


def test_zero_values_match_conjectured_roots():
    # where the identity applies, K vanishes exactly when zeta_2k is a root of f_b,
    # and that root is either predicted or one of the unexplained extras
    for b in range(4, 100):
        p = build_invpoly(b)
        pred = conj21_predict(b).predicted_orders()
        for k in divisors(b):
            if prop25_case(b, k) is None:
                continue
            res = verify_prop25(b, k, form="phase", poly=p)
            zero = abs(res.rhs) < 1e-7 * euler_phi(b)
            assert zero == is_root(p, 2 * k)
            if 2 * k in pred:
                assert zero
