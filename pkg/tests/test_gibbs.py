import math
import random
from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pvconv import gibbs as G
from pvconv.measures import ErdosModel, MultinacciModel, mu_star


def test_n_step_single_letter_uniform():
    model = MultinacciModel(2, Fraction(1, 2))
    assert G.n_step_ratio(model.measure(), (1,)) == Fraction(1, 4)
    assert math.isclose(G.n_step(model.measure(), (1,)), math.log(0.25))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 2), min_size=1, max_size=9))
def test_telescoping_exact(word):
    mu = MultinacciModel(2, Fraction(2, 5)).measure()
    prod = Fraction(1)
    for k in range(len(word)):
        prod *= G.n_step_ratio(mu, tuple(word[k:]))
    assert prod == mu(tuple(word))


def test_n_step_errors():
    mu = MultinacciModel(2, Fraction(1, 2)).measure()
    with pytest.raises(G.PotentialError):
        G.n_step_ratio(mu, ())


def test_limit_phi_head_letter():
    p, q = 0.4, 0.6
    model = MultinacciModel(2, p)
    alpha = q / p
    assert math.isclose(G.limit_phi(model, (1, 0, 2)), math.log(p * p * q * (1 + alpha)), rel_tol=1e-14)


def test_uniform_phi_values():
    assert G.uniform_f(()) == 1
    assert math.isclose(G.uniform_phi((1,)), math.log(0.25))
    with pytest.raises(G.PotentialError):
        G.uniform_phi((0, 2, 0))


def test_uniform_formula_matches_general():
    model = MultinacciModel(2, 0.5)
    rng = random.Random(7)
    for _ in range(200):
        n = rng.randint(0, 12)
        u = tuple(rng.choice((0, 2)) for _ in range(n))
        w = u + (1,) + tuple(rng.randrange(3) for _ in range(3))
        assert abs(G.uniform_phi(w) - G.limit_phi(model, w)) <= 1e-12


def test_parse_prefix():
    pr = G.parse_prefix(2, (2, 2, 0, 2, 2, 2, 1, 0))
    assert pr == G.Parse(1, (2, 1, 3), 1)
    assert G.parse_prefix(3, (4, 0)).blocks == ()


@pytest.mark.parametrize("m,p", [(2, 0.3), (2, 0.5), (3, 0.6)])
def test_cf_formula_matches_matrix_form(m, p):
    assert G.check_phi_formula(MultinacciModel(m, p), 6) <= 1e-12


@pytest.mark.parametrize("p", [0.3, 0.7])
@pytest.mark.parametrize("word", [(0,), (2,), (0, 0, 2, 0), (2, 0, 0, 2, 2, 2)])
def test_infinite_last_block_matches_long_word(p, word):
    model = MultinacciModel(2, p)
    far = G.matrix_phi(model, word + (word[-1],) * 300 + (1,), model.X(1))
    assert abs(G.limit_phi(model, word) - far) < 1e-12


def test_infinite_last_block_uniform_is_harmonic():
    model = MultinacciModel(2, 0.5)
    far = G.matrix_phi(model, (2,) * 401 + (1,), model.X(1))
    assert 0.5 < 400 * abs(G.limit_phi(model, (2,)) - far) < 2


def test_classify_synthetic():
    ns = list(range(1, 15))
    assert G.classify(ns, [0.5 * 0.7 ** n for n in ns])["decay"] == "exponential"
    assert G.classify(ns, [0.3 / n for n in ns])["decay"] == "harmonic"
    assert G.classify(ns, [0.4 + 0.01 * (-1) ** n for n in ns])["decay"] == "divergent"


def test_sup_gap_uniform_probe_and_K_monotone():
    rep = G.convergence(MultinacciModel(2, 0.5), nmax=10, window=(4, 10))
    assert all(b >= a for a, b in zip(rep.K, rep.K[1:]))
    assert rep.decay == "harmonic"
    assert G.counterexample_probe(MultinacciModel(2, 0.5), [5])[0][1] >= 0


def test_sandwich_holds():
    model = MultinacciModel(2, 0.3)
    rep = G.sup_gap(model, 8)
    assert all(r.ok for r in G.sandwich(model, rep.g, 8))


def test_quasi_bernoulli_matches_brute_force():
    mu = MultinacciModel(2, Fraction(1, 3)).measure()
    rep = G.quasi_bernoulli(mu, 3)
    words = [w for k in range(1, 4) for w in product(range(3), repeat=k)]
    ratios = [mu(a + b) / (mu(a) * mu(b)) for a in words for b in words]
    assert rep.min_ratio == min(ratios)
    assert rep.max_ratio == max(ratios)


def test_erdos_witness_ratio():
    for n, r in G.witness_ratios(ErdosModel(Fraction(1, 2)).mu, 8):
        assert r == Fraction(3 * n, 4)


def test_probe_m3():
    assert G.probe_letter(3) == 4
    rs = G.counterexample_probe(MultinacciModel(3, 0.3), range(4, 13))
    assert G.fitted_floor(rs) > 0.5
    control = G.counterexample_probe(MultinacciModel(3, 0.7), range(4, 13))
    assert control[-1][1] < 0.5 * control[0][1]
