"""Bernoulli convolutions and derived M-measures on basic intervals.

Measures are evaluated as L . M_w . R for a family of nonnegative
matrices indexed by the net alphabet.  The brute-force oracle at the end
works directly from the random-series definition and shares no code with
the matrix path.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil

import numpy as np

from . import betanet, transmat
from .iset import DigitParams, build_iset


def _num(x, exact):
    return Fraction(x) if exact else float(x)


def _arr(rows, exact):
    a = np.array(rows, dtype=object if exact else float)
    if exact:
        a = np.vectorize(Fraction, otypes=[object])(a)
    return a


def _pq(p, exact=None):
    if exact is None:
        exact = isinstance(p, (int, Fraction))
    p = _num(p, exact)
    q = 1 - p
    if not (0 < p < 1):
        raise ValueError("need 0 < p < 1")
    return p, q, exact


@dataclass
class MMeasure:
    """Word values L . M_w . R, optionally with per-first-letter heads."""

    matrices: list
    L: np.ndarray
    R: np.ndarray
    exact: bool
    heads: list | None = None
    name: str = ""

    @property
    def alphabet(self):
        return len(self.matrices)

    def vec(self, word):
        """M_w R (right-to-left accumulation)."""
        v = self.R
        for c in reversed(word):
            v = self.matrices[c].dot(v)
        return v

    def __call__(self, word):
        word = tuple(word)
        if self.heads is not None:
            if not word:
                return sum(h.dot(self.R) for h in self.heads_total())
            return self.heads[word[0]].dot(self.vec(word[1:]))
        return self.L.dot(self.vec(word))

    def heads_total(self):
        # sum over first letters of V_eta . P_eta-free R
        return self.heads

    def total_mass(self):
        return self(())


def eval_basic(measure: MMeasure, word):
    return measure(word)


class MultinacciModel:
    """The 2x2 family P_j of the multinacci net and the measure mu_*."""

    def __init__(self, m, p, exact=None):
        if m < 2:
            raise ValueError("m must be >= 2")
        p, q, exact = _pq(p, exact)
        self.m, self.p, self.q, self.exact = m, p, q, exact
        self.alpha = (q / p) ** (m - 1)
        a = self.alpha
        one = _num(1, exact)
        P = []
        for j in range(m * (m - 1) + 1):
            if j == 0:
                M = [[p ** m, 0 * one], [p ** m * a, p ** m * a]]
            elif j < m:
                c = p ** m * q ** j
                M = [[c, c], [c * a, c * a]]
            elif j == m:
                c = q ** m
                M = [[c / a, c / a], [0 * one, c]]
            else:
                x, y = betanet.multinacci_xy(m, j)
                c = p ** (x + 1) * q ** (y + 1)
                M = [[c, c], [0 * one, 0 * one]]
            P.append(_arr(M, exact))
        self.P = P
        self.L = _arr([1, 1], exact)
        self.R = _arr([1 - q ** (m - 1), q ** (m - 1)], exact)
        self.J = len(P)

    @property
    def rho(self):
        a = float(self.alpha)
        return min(a ** 0.5, a ** -0.5)

    def measure(self):
        return MMeasure(self.P, self.L, self.R, self.exact, name="mu_star")

    def xi(self, j):
        m, p, q, a = self.m, self.p, self.q, self.alpha
        if j == 0:
            return p ** m * a * a
        if j < m:
            return p ** m * q ** j * (1 + a)
        if j == m:
            return q ** m / (a * a)
        x, y = betanet.multinacci_xy(m, j)
        return p ** (x + 1) * q ** (y + 1)

    def X(self, j):
        if j in (0, self.m):
            raise ValueError("X_j is defined for j not in {0, m}")
        if j < self.m:
            return _arr([1, self.alpha], self.exact)
        return _arr([1, 0], self.exact)


def mu_star(model: MultinacciModel, word):
    v = model.R
    for c in reversed(tuple(word)):
        v = model.P[c].dot(v)
    return model.L.dot(v)


def projector(m, exact=True):
    X = [[0] * (m + 1) for _ in range(2)]
    X[0][0] = 1
    X[1][2] = 1
    return _arr(X, exact)


class BernoulliConvolution:
    """(beta, d) Bernoulli convolution on the net of an adapted system.

    The state vector V_k = mu([0,1) + i_k) is the fixed vector of
    sum_j M_{w_j}; it is normalized so that the integer translates
    [n, n+1), n < alpha_mu, carry total mass 1.
    """

    def __init__(self, field, d, probs, system=None, exact=None):
        self.field = field
        self.params = DigitParams.make(field, d)
        self.iset, self.edges = build_iset(field, self.params)
        self.family = transmat.build_matrices(self.iset, self.edges, probs, exact)
        self.exact = self.family.exact
        self.system = system or betanet.adapted_system(field)
        words = [[int(c) for c in w] for w in self.system.words]
        self.hat = [transmat.word_product(self.family, w) for w in words]
        total = self.hat[0]
        for M in self.hat[1:]:
            total = total + M
        top = ceil(float(self.params.alpha_mu))
        Lint = [0] * len(self.iset)
        for n in range(top):
            x = field.from_integer(n)
            if x not in self.iset:
                raise ValueError("integer translate %d missing from the I-set" % n)
            Lint[self.iset.position(x)] = 1
        self.V = transmat.fixed_vector(total, Lint)
        e0 = [0] * len(self.iset)
        e0[0] = 1
        self.measure = MMeasure(self.hat, _arr(e0, self.exact), self.V, self.exact, name="mu")

    def __call__(self, word):
        return self.measure(word)


def multinacci_mu(m, p, exact=None):
    p, q, exact = _pq(p, exact)
    field = betanet.multinacci_field(m)
    system = betanet.multinacci_adapted_system(m, field)
    return BernoulliConvolution(field, 2, [p, q], system, exact)


class ErdosModel:
    """Golden-ratio Bernoulli convolution on the scaled net of [0, beta)."""

    def __init__(self, p, exact=None):
        p, q, exact = _pq(p, exact)
        self.p, self.q, self.exact = p, q, exact
        self.multi = MultinacciModel(2, p, exact)
        self.P = self.multi.P
        self.V = [_arr([p, 0], exact), _arr([p * q, p * q], exact), _arr([0, q], exact)]
        self.T = _arr([p / (1 - p * q), q / (1 - p * q)], exact)
        self.mu = MMeasure(self.P, None, self.T, exact, heads=self.V, name="erdos")
        self.mu_tilde_star = MMeasure(self.P, _arr([1, 1], exact), _arr([p, q], exact), exact,
                                      name="erdos_tilde_star")

    def total_mass(self):
        return sum(h.dot(self.T) for h in self.V)


def erdos_mu(model: ErdosModel, word):
    if not word:
        raise ValueError("empty word: use total_mass()")
    return model.mu(word)


def total_mass_identity(p):
    """(p^2 + p^2 q + q^2 + p q^2)/(1 - pq) for q = 1 - p."""
    q = 1 - p
    return (p * p + p * p * q + q * q + p * q * q) / (1 - p * q)


@dataclass
class MeasureEnclosure:
    lo: float
    hi: float
    digits_used: int
    straddling_states: int = 0


def brute_force_enclosure(field, d, probs, interval, N, budget=1 << 24, margin=1e-12):
    """Enclose mu([a, b)) by enumerating the first N digits of X = sum w_k beta^{-k-1}.

    States are the exact values beta^n X_n in Z[beta] (so coincident
    prefixes merge), carried with their mass.  A prefix is settled once its
    value interval [X_n, X_n + alpha_mu beta^{-n}] lies inside or outside
    the target with a safety margin; straddling prefixes are kept and
    finally widen the enclosure.
    """
    s = field.degree
    beta = field.beta_float
    a, b = (float(x) for x in interval)
    alpha_mu = (d - 1) / (beta - 1)
    red = np.array(field._reduction, dtype=np.int64)
    powers = beta ** np.arange(s)
    probs = np.asarray([float(x) for x in probs])

    Y = np.zeros((1, s), dtype=np.int64)
    mass = np.ones(1)
    lo = 0.0
    for n in range(1, N + 1):
        # Y <- beta * Y + digit, reduced modulo the minimal polynomial
        shifted = np.zeros_like(Y)
        shifted[:, 1:] = Y[:, :-1]
        shifted += np.outer(Y[:, -1], red)
        newY = np.repeat(shifted, d, axis=0)
        newY[:, 0] += np.tile(np.arange(d, dtype=np.int64), len(Y))
        newm = np.repeat(mass, d) * np.tile(probs, len(Y))
        keep = newm > 0
        newY, newm = newY[keep], newm[keep]
        uniq, inv = np.unique(newY, axis=0, return_inverse=True)
        inv = inv.reshape(-1)
        m2 = np.zeros(len(uniq))
        np.add.at(m2, inv, newm)
        Y, mass = uniq, m2
        if len(Y) * d > budget:
            raise RuntimeError("oracle budget exceeded at depth %d" % n)
        scale = beta ** -n
        x0 = (Y @ powers) * scale
        x1 = x0 + alpha_mu * scale
        inside = (x0 >= a + margin) & (x1 <= b - margin)
        outside = (x1 <= a - margin) | (x0 >= b + margin)
        lo += mass[inside].sum()
        rest = ~(inside | outside)
        Y, mass = Y[rest], mass[rest]
        if len(Y) == 0:
            break
    return MeasureEnclosure(lo, lo + mass.sum(), N, len(Y))


def compare_mu_mustar(m, p, word, exact=None, mu=None, model=None):
    """Ratio mu[[w]]/mu_*[[w]] and the bounds [C^{k+1}, 2], C = (pq)^m."""
    word = tuple(word)
    if all(c == 0 for c in word):
        raise ValueError("all-zero word is outside the comparison hypothesis")
    model = model or MultinacciModel(m, p, exact)
    mu = mu or multinacci_mu(m, p, exact)
    k = 0
    while word[k] == 0:
        k += 1
    ratio = mu(word) / mu_star(model, word)
    C = (model.p * model.q) ** m
    lower = C ** (k + 1)
    return ratio, lower, 2
