import math
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from pvconv import contfrac as C

alphas = st.one_of(st.floats(0.05, 0.95), st.floats(1.05, 20.0))
digit_lists = st.tuples(st.integers(0, 3), st.lists(st.integers(1, 6), min_size=1, max_size=25)).map(
    lambda t: (t[0],) + tuple(t[1]))


def test_regular_small():
    assert C.cf_eval(C.CFParams(Fraction(1), 0, (1, 2))) == Fraction(3, 2)


def test_golden_limit():
    phi = (1 + 5 ** 0.5) / 2
    val = C.cf_limit(C.CFParams(1.0, 0, (1,)), stream=C.periodic([1]), tol=1e-12)
    assert abs(val - phi) <= 1e-12


def test_infinite_last_digit_matches_large_digit():
    params = C.CFParams(Fraction(1, 4), 0, (1, 3, 2))
    lim = C.cf_limit(params)
    far = C.cf_eval(C.CFParams(Fraction(1, 4), 0, (1, 3, 2, 200)))
    assert abs(float(lim) - float(far)) < 1e-12


def test_validation():
    with pytest.raises(C.CFError):
        C.CFParams(0, 0, (1,))
    with pytest.raises(C.CFError):
        C.CFParams(1.0, 2, (1,))
    with pytest.raises(C.CFError):
        C.CFParams(1.0, 0, (1, 0))
    with pytest.raises(C.CFError):
        C.gap_bound(C.CFParams(1.0, 0, (1, 2)), 1)


@settings(max_examples=100)
@given(alphas, st.integers(0, 1), digit_lists)
def test_interlacing(alpha, kappa, digits):
    params = C.CFParams(alpha, kappa, digits)
    vals = [C.cf_eval(params, n) for n in range(len(digits))]
    even, odd = vals[0::2], vals[1::2]
    tol = 1e-12
    assert all(b >= a - tol * abs(a) for a, b in zip(even, even[1:]))
    assert all(b <= a + tol * abs(a) for a, b in zip(odd, odd[1:]))
    if odd:
        assert max(even) <= min(odd) * (1 + tol)


@settings(max_examples=60)
@given(st.fractions(Fraction(1, 10), Fraction(10)), st.integers(0, 1), digit_lists)
def test_vector_forms(alpha, kappa, digits):
    assume(len(digits) >= 2)
    params = C.CFParams(alpha, kappa, digits)
    n = len(digits) - 2
    assert C.cf_eval_vector(params, n, 1, 0) == C.cf_eval(params, n)
    u, _ = C.uv(alpha, kappa, n + 1, digits[n + 1])
    assert C.cf_eval_vector(params, n, u, 1) == C.cf_eval(params, n + 1)


@settings(max_examples=60)
@given(st.fractions(Fraction(1, 10), Fraction(10)), st.integers(0, 1), digit_lists,
       st.fractions(Fraction(0), Fraction(5)), st.fractions(Fraction(0), Fraction(5)))
def test_vector_deviation_bound(alpha, kappa, digits, x, y):
    assume(x + y > 0)
    params = C.CFParams(alpha, kappa, digits)
    n = len(digits) - 1
    assume(n >= 1)
    st_, _ = C.run(params)
    u, v = C.uv(alpha, kappa, n, digits[n])
    dev = abs(C.cf_eval_vector(params, n, x, y) - st_.p / st_.q)
    delta = abs(st_.p / st_.q - st_.p1 / st_.q1)
    assert dev <= y * v / (x * u + y * v) * delta


@settings(max_examples=100)
@given(alphas, st.integers(0, 1), digit_lists)
def test_gaps_within_bound(alpha, kappa, digits):
    params = C.CFParams(alpha, kappa, digits)
    ds = C.deltas(params)
    for n in range(1, len(ds) + 1):
        assert ds[n - 1] <= C.gap_bound(params, n) * (1 + 1e-12)
    assert all(b <= a * (1 + 1e-12) for a, b in zip(ds, ds[1:]))


@settings(max_examples=100)
@given(st.lists(st.integers(1, 6), min_size=1, max_size=25))
def test_regular_bound_from_a1(tail):
    params = C.CFParams(1.0, 0, (2,) + tuple(tail))
    ds = C.deltas(params)
    for n in range(1, len(ds) + 1):
        assert ds[n - 1] <= C.regular_bound(params, n, include_a0=False) * (1 + 1e-12)


def test_regular_bound_with_a0_fails_for_positive_a0():
    # [3; 1] = 4 and [3] = 3, so delta_1 = 1 > 1/(3 + 1)
    params = C.CFParams(Fraction(1), 0, (3, 1))
    assert C.delta_n(params, 1) == 1
    assert C.regular_bound(params, 1) == Fraction(1, 4)


@settings(max_examples=50)
@given(alphas, st.integers(0, 1), digit_lists)
def test_recursion_matches_product(alpha, kappa, digits):
    params = C.CFParams(alpha, kappa, digits)
    st_, _ = C.run(params)
    M, _ = C.matrix_product(params)
    assert math.isclose(st_.p / st_.q, M[0, 0] / M[1, 0], rel_tol=1e-13)


@settings(max_examples=30)
@given(alphas, st.integers(0, 1), digit_lists, st.sampled_from([1, 3, 7, 32]))
def test_renormalization_invariance(alpha, kappa, digits, every):
    params = C.CFParams(alpha, kappa, digits)
    a, _ = C.run(params, renorm=every)
    b, _ = C.run(params, renorm=10 ** 6)
    assert math.isclose(a.p / a.q, b.p / b.q, rel_tol=1e-13)


def test_delta_exact_and_float_agree():
    digits = (1, 2, 3, 1, 4)
    exact = C.delta_n(C.CFParams(Fraction(3, 7), 1, digits), 4)
    approx = C.delta_n(C.CFParams(3 / 7, 1, digits), 4)
    assert math.isclose(float(exact), approx, rel_tol=1e-12)
