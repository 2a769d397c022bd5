from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from pvconv.algebraic import (AlgebraicNumber, FieldError, RationalCombination, compare,
                              garsia_bound, parse_field, poly_to_str)

FIELDS = {
    "golden": "x^2-x-1@1.6",
    "quadratic": "x^2-5x-3@5.5",
    "cubic": "x^3-3x^2+1@2.9",
    "tribonacci": "x^3-x^2-x-1@1.8",
}
F = {k: parse_field(v) for k, v in FIELDS.items()}

coeffs2 = st.lists(st.integers(-50, 50), min_size=2, max_size=2)
coeffs3 = st.lists(st.integers(-50, 50), min_size=3, max_size=3)


def test_parse_and_descriptor_round_trip():
    for desc in FIELDS.values():
        f = parse_field(desc)
        assert f.descriptor() == desc
        assert parse_field(f.descriptor()).poly == f.poly


def test_poly_to_str():
    assert poly_to_str((1, -5, -3)) == "x^2-5x-3"
    assert poly_to_str((1, 0, -1)) == "x^2-1"


@pytest.mark.parametrize("bad", ["x^2-y", "x^2-x-1@abc", "", "x^2-x/2-1"])
def test_malformed_descriptor(bad):
    with pytest.raises((FieldError, ValueError)):
        parse_field(bad)


def test_reducible_rejected():
    with pytest.raises(FieldError):
        parse_field("x^2-1@1")


def test_beta_values():
    phi = (1 + 5 ** 0.5) / 2
    assert abs(F["golden"].beta_float - phi) < 1e-15
    lo, hi = F["golden"].enclosure(40)
    mpmath.mp.dps = 60
    exact = (1 + mpmath.sqrt(5)) / 2
    assert mpmath.mpf(lo.numerator) / lo.denominator <= exact <= mpmath.mpf(hi.numerator) / hi.denominator
    assert hi - lo < Fraction(1, 10 ** 10)
    assert abs(F["quadratic"].beta_float - (5 + 37 ** 0.5) / 2) < 1e-13


def test_pv_checks():
    for f in F.values():
        assert f.is_pv
    assert not parse_field("x^2-3@1.7").is_pv


def test_conjugate_moduli_match_mpmath():
    f = F["cubic"]
    mpmath.mp.dps = 60
    roots = sorted(abs(r) for r in mpmath.polyroots([1, -3, 0, 1], maxsteps=200, extraprec=200))
    mods = sorted(f.conjugate_moduli)
    for (lo, hi), r in zip(mods, roots[:2]):
        assert mpmath.mpf(lo.numerator) / lo.denominator <= r <= mpmath.mpf(hi.numerator) / hi.denominator


def test_garsia_golden():
    # (1 - 1/phi)/M for the golden ratio
    b = garsia_bound(F["golden"], 4)
    assert abs(float(b) - (1 - 0.6180339887498949) / 4) < 1e-9
    mpmath.mp.dps = 60
    exact = (1 - (mpmath.sqrt(5) - 1) / 2) / 4
    assert mpmath.mpf(b.numerator) / b.denominator <= exact


def test_sign_near_zero():
    f = F["quadratic"]
    x = f.beta - 5
    assert compare(x, 1) == -1
    assert compare(x, 0) == 1
    assert (f.beta * f.beta - 5 * f.beta - 3).is_zero()


@given(coeffs2, coeffs2)
def test_ring_axioms_golden(a, b):
    f = F["golden"]
    x, y = f.element(a), f.element(b)
    assert (x + y) - y == x
    assert x * y == y * x
    assert x * (y + f.one) == x * y + x


@settings(max_examples=60)
@given(coeffs3)
def test_sign_matches_high_precision(a):
    f = F["cubic"]
    x = f.element(a)
    val = sum(c * f.beta_mp(60) ** k for k, c in enumerate(a))
    if x.is_zero():
        assert val == 0
    else:
        assert x.sign() == (1 if val > 0 else -1)


@settings(max_examples=60)
@given(coeffs3.filter(lambda a: any(a)))
def test_inverse(a):
    f = F["tribonacci"]
    x = RationalCombination(f.element(a))
    assert (x * x.inverse()) == RationalCombination(f.one)


@given(coeffs2, st.integers(1, 20))
def test_rational_combination_interval(a, den):
    f = F["golden"]
    x = RationalCombination(f.element(a), den)
    lo, hi = x.interval(10)
    assert lo <= Fraction(float(x)) + Fraction(1, 10 ** 9) and Fraction(float(x)) - Fraction(1, 10 ** 9) <= hi
