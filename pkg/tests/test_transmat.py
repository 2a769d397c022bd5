from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pvconv.algebraic import parse_field
from pvconv.iset import DigitParams, build_iset
from pvconv.transmat import (FixedVectorError, build_matrices, check_probs, fixed_vector,
                             parse_probs, sum_family, to_strings, word_product)


def _golden(probs):
    f = parse_field("x^2-x-1@1.6")
    I, edges = build_iset(f, DigitParams.make(f, 2))
    return build_matrices(I, edges, probs)


def test_parse_probs_modes():
    assert parse_probs("1/6,1/3,1/2") == ([Fraction(1, 6), Fraction(1, 3), Fraction(1, 2)], True)
    vals, exact = parse_probs("0.3,0.7")
    assert not exact and vals == [0.3, 0.7]
    assert parse_probs("0.3,0.7", exact=True) == ([Fraction(3, 10), Fraction(7, 10)], True)


@pytest.mark.parametrize("probs,exact", [([Fraction(1, 2), Fraction(1, 3)], True),
                                         ([-0.5, 1.5], False)])
def test_check_probs_rejects(probs, exact):
    with pytest.raises(ValueError):
        check_probs(probs, exact)


def test_golden_matrices():
    p, q = Fraction(1, 3), Fraction(2, 3)
    fam = _golden([p, q])
    assert to_strings(fam[0]) == [["1/3", "0", "0"], ["0", "0", "2/3"], ["2/3", "1/3", "0"]]
    assert to_strings(fam[1]) == [["2/3", "1/3", "0"], ["0", "0", "0"], ["0", "2/3", "0"]]


words = st.lists(st.integers(0, 1), max_size=8)


@given(words, words)
def test_word_product_is_a_morphism(u, v):
    fam = _golden([Fraction(1, 3), Fraction(2, 3)])
    assert (word_product(fam, u + v) == word_product(fam, u).dot(word_product(fam, v))).all()


def test_fixed_vector_exact_and_float_agree():
    fam = _golden([Fraction(1, 3), Fraction(2, 3)])
    # words of the adapted system for the golden ratio: "0" and "10"
    M = sum_family(fam, [[0], [1, 0]])
    L = [1, 1, 0]
    ve = fixed_vector(M, L)
    assert (M.dot(ve) == ve).all() and sum(ve[:2]) == 1
    assert all(x >= 0 for x in ve)
    vf = fixed_vector(M.astype(float), L)
    assert np.allclose(vf, np.array(ve, dtype=float), atol=1e-12)


def test_fixed_vector_absent():
    with pytest.raises(FixedVectorError):
        fixed_vector(np.array([[0.5, 0.0], [0.0, 0.5]]), [1, 1])


@settings(max_examples=25, deadline=None)
@given(st.fractions(min_value=Fraction(1, 20), max_value=Fraction(19, 20)))
def test_rows_of_sum_reach_all_mass(p):
    # row 0 of M_0 + M_1 is (p, 0, 0) + (q, p, 0)
    fam = _golden([p, 1 - p])
    total = fam[0] + fam[1]
    assert sum(total[0]) == 1 + p
