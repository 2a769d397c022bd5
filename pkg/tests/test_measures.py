from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from pvconv import betanet
from pvconv.algebraic import parse_field
from pvconv.measures import (BernoulliConvolution, ErdosModel, MultinacciModel, brute_force_enclosure,
                             compare_mu_mustar, mu_star, multinacci_mu, total_mass_identity)

probs = st.fractions(min_value=Fraction(1, 20), max_value=Fraction(19, 20))
erdos_words = st.lists(st.integers(0, 2), min_size=1, max_size=7).map(tuple)


def test_uniform_mu_star_of_letter_one():
    model = MultinacciModel(2, Fraction(1, 2))
    assert mu_star(model, (1,)) == Fraction(1, 4)


@pytest.mark.parametrize("n", [1, 2, 5, 9])
def test_erdos_closed_form(n):
    assert ErdosModel(Fraction(1, 2)).mu((2,) + (0,) * (n - 1)) == Fraction(n, 3 * 4 ** (n - 1))


@given(probs)
def test_total_mass(p):
    assert total_mass_identity(p) == 1
    assert ErdosModel(p).total_mass() == 1
    model = MultinacciModel(2, p)
    assert model.measure()(()) == 1


@settings(max_examples=40, deadline=None)
@given(probs, erdos_words)
def test_erdos_additivity(p, w):
    model = ErdosModel(p)
    assert sum(model.mu(w + (j,)) for j in range(3)) == model.mu(w)


@settings(max_examples=20, deadline=None)
@given(probs, st.integers(2, 4), st.data())
def test_mu_star_additivity(p, m, data):
    model = MultinacciModel(m, p)
    w = tuple(data.draw(st.lists(st.integers(0, model.J - 1), max_size=4)))
    assert sum(mu_star(model, w + (j,)) for j in range(model.J)) == mu_star(model, w)


def test_multinacci_mu_first_translate():
    # mu([0,1)) = p/(1 - pq) for the golden ratio, normalized over the integer translates
    bc = multinacci_mu(2, Fraction(1, 3))
    assert bc.V[0] == Fraction(1, 3) / (1 - Fraction(2, 9)) / (bc.V[0] + bc.V[1])
    assert bc.measure(()) == bc.V[0]


def test_bernoulli_convolution_quadratic_mass():
    f = parse_field("x^2-5x-3@5.5")
    bc = BernoulliConvolution(f, 6, [Fraction(1, 6)] * 6)
    total = sum(bc((j,)) for j in range(len(bc.system)))
    assert total == bc.measure(())


@pytest.mark.parametrize("word", [(2,), (0, 1), (1, 2, 0), (2, 0, 0, 2)])
def test_oracle_encloses_matrix_value(word):
    net = betanet.scaled_erdos_net()
    iv = net.interval_of_word(word)
    for p in (0.5, 0.3):
        v = float(ErdosModel(p).mu(word))
        enc = brute_force_enclosure(net.field, 2, [p, 1 - p], (float(iv.left), float(iv.right)), 22)
        assert enc.lo - 1e-12 <= v <= enc.hi + 1e-12
        assert enc.hi - enc.lo < 1e-2


def test_oracle_budget():
    f = parse_field("x^2-x-1@1.6")
    with pytest.raises(RuntimeError):
        brute_force_enclosure(f, 2, [0.5, 0.5], (0.3, 0.7), 30, budget=3)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(0, 2), min_size=1, max_size=5).filter(lambda w: any(w)))
def test_comparison_bounds(word):
    p = Fraction(1, 3)
    ratio, lower, upper = compare_mu_mustar(2, p, word)
    assert lower <= ratio <= upper


def test_mu_star_in_double_mode():
    exact = mu_star(MultinacciModel(3, Fraction(3, 10)), (0, 3, 5))
    approx = mu_star(MultinacciModel(3, 0.3), (0, 3, 5))
    assert abs(float(exact) - approx) < 1e-15
