"""n-step potentials, the limit potential Phi of mu_*, and Gibbs diagnostics."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import numpy as np

from . import contfrac
from .measures import MultinacciModel, mu_star

LOG_BUDGET = 5_000_000


class PotentialError(ValueError):
    pass


# -- n-step potential -------------------------------------------------------

def n_step_ratio(measure, word):
    """eta[[xi_0..xi_{n-1}]] / eta[[xi_1..xi_{n-1}]] (exact in rational mode)."""
    word = tuple(word)
    if not word:
        raise PotentialError("empty word")
    den = measure(word[1:]) if len(word) > 1 else measure(())
    if den == 0:
        raise PotentialError("zero denominator for word %s" % (word,))
    return measure(word) / den


def n_step(measure, word):
    return math.log(n_step_ratio(measure, word))


# -- limit potential ----------------------------------------------------------

@dataclass(frozen=True)
class Parse:
    kappa: int          # 0 if the prefix starts with a 0-block, 1 for an m-block
    blocks: tuple       # a_1, ..., a_n
    letter: int | None  # first letter outside {0, m}; None for pure streams


def parse_prefix(m, word):
    """Split word into maximal alternating {0, m}-blocks and the next letter."""
    word = tuple(word)
    blocks = []
    k = 0
    kappa = None
    while k < len(word) and word[k] in (0, m):
        c = word[k]
        if kappa is None:
            kappa = 0 if c == 0 else 1
        run = 0
        while k < len(word) and word[k] == c:
            run += 1
            k += 1
        blocks.append(run)
    letter = word[k] if k < len(word) else None
    return Parse(kappa if kappa is not None else 0, tuple(blocks), letter)


def _delta_pow(v, e):
    return v if e % 2 == 0 else (v[1], v[0])


def limit_phi(model: MultinacciModel, word, tail="inf", stream=None):
    """Phi from the continued-fraction display.

    ``word`` is either a prefix containing a letter j outside {0, m} (the
    value then only depends on the part up to j) or a pure {0, m}-word; in
    the latter case ``tail="inf"`` lets the last block run forever, and a
    ``stream`` of further block lengths gives the infinite-stream value.
    """
    m = model.m
    pr = parse_prefix(m, word)
    if not pr.blocks:
        if pr.letter is None:
            raise PotentialError("empty prefix")
        return math.log(model.xi(pr.letter))
    kappa = pr.kappa
    khat = 1 - kappa
    head = model.xi(0 if kappa == 0 else m)
    params = contfrac.CFParams(model.alpha, khat, (1,) + pr.blocks)
    n = len(pr.blocks)
    if pr.letter is not None:
        x, y = _delta_pow(tuple(model.X(pr.letter)), khat + n)
        val = contfrac.cf_eval_vector(params, n, x, y)
    elif stream is not None:
        val = contfrac.cf_limit(params, stream=stream)
    elif tail == "inf":
        # the last block itself runs forever: replace it by an infinite digit
        val = contfrac.cf_limit(contfrac.CFParams(model.alpha, khat, (1,) + pr.blocks[:-1]))
    else:
        raise PotentialError("pure {0,m} prefix needs a tail")
    return math.log(head * val)


def uniform_f(blocks):
    """f(a_0, ..., a_{2n}) = 1 + 1/(a_0 + 1/(... + 1/(a_{2n} + 1))); f() = 1."""
    if not blocks:
        return Fraction(1)
    a = list(blocks)
    if len(a) % 2 == 0:
        a.append(0)
    x = Fraction(a[-1] + 1)
    for ak in reversed(a[:-1]):
        x = ak + 1 / x
    return 1 + 1 / x


def uniform_phi(word):
    """Phi(0^{a_0} 2^{a_1} ... 1 xi) = log(f(a_0, ..., a_{2n})/4) for the uniform m = 2 model."""
    pr = parse_prefix(2, word)
    if pr.letter != 1:
        raise PotentialError("uniform formula needs a prefix closed by the letter 1")
    return math.log(uniform_f(pr.blocks) / 4)


# -- vectorized word sweeps ---------------------------------------------------

def _float_P(model):
    return [np.asarray(P, dtype=float) for P in model.P]


def level_vectors(Ps, v, n):
    """Yield arrays A_k (k = 0..n) with rows P_w v for all words of length k.

    Row index = word read as a base-|alphabet| number, first letter most
    significant, so the suffix sigma(w) has index idx mod |alphabet|^{k-1}.
    """
    A = np.asarray(v, dtype=float).reshape(1, -1)
    yield A
    stack = np.stack(Ps)                       # (J, 2, 2)
    for _ in range(n):
        A = np.einsum("jab,nb->jna", stack, A).reshape(-1, A.shape[1])
        yield A


def tail_extremes(model, iters=10000):
    """Extreme directions (1 - t, t) of P_u X_j over tails.

    Directions reachable by tails form a set closed under the maps
    t -> dir(P_c (1-t, t)), c in {0, m}, and containing dir(X_j); the
    endpoints of its hull are found by monotone iteration.
    """
    m = model.m
    Ps = _float_P(model)
    Xs = [np.asarray(model.X(j), dtype=float) for j in range(model.J) if j not in (0, m)]
    T = [x[1] / x.sum() for x in Xs]

    def f(c, t):
        v = Ps[c] @ np.array([1 - t, t])
        return v[1] / v.sum()

    lo, hi = min(T), max(T)
    for _ in range(iters):
        imgs = [f(c, t) for c in (0, m) for t in (lo, hi)]
        lo2, hi2 = min(T + imgs + [lo]), max(T + imgs + [hi])
        if lo2 == lo and hi2 == hi:
            break
        lo, hi = lo2, hi2
    return np.array([1 - lo, lo]), np.array([1 - hi, hi])


def _phi_from_levels(Ak, Akm1, J):
    num = Ak.sum(axis=1)
    den = np.tile(Akm1.sum(axis=1), J)
    return np.log(num) - np.log(den)


@dataclass
class ConvergenceReport:
    m: int
    p: float
    ns: list
    g: list
    g_canonical: list
    g_sampled: list
    exhaustive_full: list
    K: list = field(default_factory=list)
    decay: str = ""
    rate: float | None = None
    harmonic_K: float | None = None
    r2: float | None = None
    variation: float | None = None

    def as_dict(self):
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def sup_gap(model, nmax, n_random=100, seed=0, budget=LOG_BUDGET):
    """g_n = sup over prefixes and tails of |phi_n - Phi|, n = 1..nmax.

    Words with a letter outside {0, m} have zero gap (P_j has rank one and
    its row is proportional to L), so the sup is taken over {0, m}^n.  The
    tail sup uses the canonical tail "1", ``n_random`` sampled tails, and
    the two extreme tail directions.  When |J|^n fits the budget the full
    J^n sweep is also run and folded into g_n.
    """
    m = model.m
    Ps = _float_P(model)
    R = np.asarray(model.R, dtype=float)
    X1 = np.asarray(model.X(1), dtype=float)
    vmin, vmax = tail_extremes(model)
    rng = np.random.default_rng(seed)
    samples = []
    for _ in range(n_random):
        u = rng.integers(0, model.J, size=int(rng.integers(1, 16)))
        v = X1.copy()
        for c in reversed(u):
            v = Ps[c] @ v
        samples.append(v / v.sum())
    sub = [Ps[0], Ps[m]]

    def gaps(alphabet_Ps, dirs, n):
        J = len(alphabet_Ps)
        out = np.zeros(n)
        gens = [level_vectors(alphabet_Ps, d, n) for d in [R] + dirs]
        prev = [next(g) for g in gens]
        for k in range(1, n + 1):
            cur = [next(g) for g in gens]
            phi = _phi_from_levels(cur[0], prev[0], J)
            gk = 0.0
            for c, pv in zip(cur[1:], prev[1:]):
                gk = max(gk, float(np.max(np.abs(phi - _phi_from_levels(c, pv, J)))))
            out[k - 1] = gk
            prev = cur
        return out

    g_can = gaps(sub, [X1], nmax)
    g_ext = gaps(sub, [vmin, vmax], nmax)
    g_smp = gaps(sub, samples, nmax)
    nfull = 0
    while nfull < nmax and model.J ** (nfull + 1) <= budget:
        nfull += 1
    g_full = gaps(Ps, [X1, vmin, vmax], nfull) if nfull else np.zeros(0)
    g = np.maximum(np.maximum(g_can, g_ext), g_smp)
    g[:nfull] = np.maximum(g[:nfull], g_full)
    ns = list(range(1, nmax + 1))
    K = list(np.exp(np.cumsum(g)))
    return ConvergenceReport(m, float(model.p), ns, list(g), list(g_can), list(g_smp),
                             [k <= nfull for k in ns], K)


def classify(ns, gs, window=(6, 14), r2_min=0.98, slope_max=-0.01, harmonic_var=0.25):
    """Decay class of g_n over the fit window.

    harmonic if g_n * n varies by at most ``harmonic_var`` (relative to its
    mean); otherwise exponential if log g_n vs n fits with R^2 >= r2_min
    and slope < slope_max; otherwise divergent.
    """
    ns = np.asarray(ns, dtype=float)
    gs = np.asarray(gs, dtype=float)
    sel = (ns >= window[0]) & (ns <= window[1])
    n, g = ns[sel], gs[sel]
    out = {"window": list(window)}
    if len(n) < 3 or np.any(g <= 0):
        out.update(decay="divergent", rate=None, r2=None, variation=None, harmonic_K=None)
        return out
    gn = g * n
    variation = float((gn.max() - gn.min()) / gn.mean())
    slope, icpt = np.polyfit(n, np.log(g), 1)
    resid = np.log(g) - (slope * n + icpt)
    ss = np.sum((np.log(g) - np.log(g).mean()) ** 2)
    r2 = float(1 - np.sum(resid ** 2) / ss) if ss > 0 else 0.0
    out.update(rate=float(slope), r2=r2, variation=variation, harmonic_K=float(gn.mean()))
    if variation <= harmonic_var:
        out["decay"] = "harmonic"
    elif r2 >= r2_min and slope < slope_max:
        out["decay"] = "exponential"
    else:
        out["decay"] = "divergent"
    return out


def convergence(model, nmax=14, window=(6, 14), **kw):
    rep = sup_gap(model, nmax, **kw)
    c = classify(rep.ns, rep.g, window)
    rep.decay, rep.rate, rep.r2 = c["decay"], c["rate"], c["r2"]
    rep.variation, rep.harmonic_K = c["variation"], c["harmonic_K"]
    return rep


# -- cross-checks between the matrix form and the continued-fraction form -------

def matrix_phi(model, word, v):
    """log(L P_w v / L P_{sigma w} v)."""
    Ps = _float_P(model)
    a = np.asarray(v, dtype=float)
    for c in reversed(word[1:]):
        a = Ps[c] @ a
    b = Ps[word[0]] @ a
    return math.log(b.sum() / a.sum())


def check_phi_formula(model, nmax, tol=1e-12):
    """Max |CF formula - matrix form| over every prefix u j with u in {0,m}^{<= nmax}."""
    m = model.m
    worst = 0.0
    for k in range(nmax + 1):
        for u in product((0, m), repeat=k):
            for j in range(model.J):
                if j in (0, m):
                    continue
                w = u + (j,)
                a = limit_phi(model, w)
                b = matrix_phi(model, w, model.X(j))
                worst = max(worst, abs(a - b))
    return worst


@dataclass
class SandwichReport:
    n: int
    K_n: float
    lo: float
    hi: float
    ok: bool


def sandwich(model, g, nmax, budget=LOG_BUDGET):
    """Check 1/K_n <= mu_*[[w]] / exp(S_n Phi(w 1 ...)) <= K_n for all w in J^n.

    ``g`` holds g_1..g_N; Phi along the canonical tail is the matrix form,
    which ``check_phi_formula`` ties to the continued-fraction display.
    """
    Ps = _float_P(model)
    J = model.J
    R = np.asarray(model.R, dtype=float)
    X1 = np.asarray(model.X(1), dtype=float)
    out = []
    genR = level_vectors(Ps, R, nmax)
    genX = level_vectors(Ps, X1, nmax)
    pR, pX = next(genR), next(genX)
    S = np.zeros(1)
    logK = 0.0
    for k in range(1, nmax + 1):
        if J ** k > budget:
            break
        cR, cX = next(genR), next(genX)
        phi = _phi_from_levels(cX, pX, J)
        S = phi + np.tile(S, J)
        logK += g[k - 1]
        dev = np.log(cR.sum(axis=1)) - S
        lo, hi = float(dev.min()), float(dev.max())
        ok = lo >= -logK - 1e-9 and hi <= logK + 1e-9
        out.append(SandwichReport(k, math.exp(logK), lo, hi, ok))
        pR, pX = cR, cX
    return out


# -- quasi-Bernoulli ------------------------------------------------------------

def _words(J, max_len):
    for k in range(1, max_len + 1):
        yield from product(range(J), repeat=k)


def quasi_bernoulli(measure, max_len):
    """Extremal eta[[ww']]/(eta[[w]] eta[[w']]) over 1 <= |w|, |w'| <= max_len.

    With 2-dimensional families the ratio is a linear-fractional function of
    the direction of the row L P_w (resp. of the column P_w' R), so its
    extremes are attained at extreme directions; these are located over all
    words and combined exactly.  Larger families fall back to brute force.
    """
    J = measure.alphabet
    dim = measure.R.shape[0]
    exact = measure.exact
    Ps = measure.matrices

    def val(w):
        return measure(w)

    if dim != 2:
        best_lo = best_hi = None
        ws = list(_words(J, max_len))
        vals = {w: val(w) for w in ws}
        for w in ws:
            for w2 in ws:
                r = val(w + w2) / (vals[w] * vals[w2])
                best_lo = r if best_lo is None or r < best_lo else best_lo
                best_hi = r if best_hi is None or r > best_hi else best_hi
        return QuasiBernoulliReport(max_len, best_lo, best_hi, None, None)

    # rows: L P_w (or head V_{w0} P_{w[1:]})
    rows = {}
    cols = {}
    for w in _words(J, max_len):
        if measure.heads is not None:
            r = measure.heads[w[0]]
            for c in w[1:]:
                r = r.dot(Ps[c])
        else:
            r = measure.L
            for c in w:
                r = r.dot(Ps[c])
        rows[w] = r
        c = measure.R
        for x in reversed(w):
            c = Ps[x].dot(c)
        cols[w] = c

    def tdir(v):
        s = v[0] + v[1]
        return float(v[1] / s) if s else 0.0

    row_ext = _extreme_keys(rows, tdir, None)
    group = (lambda w: w[0]) if measure.heads is not None else (lambda w: None)
    col_ext = _extreme_keys(cols, tdir, group)
    lo = hi = None
    arg_lo = arg_hi = None
    for w in row_ext:
        for w2 in col_ext:
            r = val(w + w2) / (val(w) * val(w2))
            if lo is None or r < lo:
                lo, arg_lo = r, (w, w2)
            if hi is None or r > hi:
                hi, arg_hi = r, (w, w2)
    return QuasiBernoulliReport(max_len, lo, hi, arg_lo, arg_hi)


def _extreme_keys(vecs, tdir, group):
    best = {}
    for w, v in vecs.items():
        g = group(w) if group else None
        t = tdir(v)
        lo, hi = best.get(g, ((math.inf, None), (-math.inf, None)))
        if t < lo[0]:
            lo = (t, w)
        if t > hi[0]:
            hi = (t, w)
        best[g] = (lo, hi)
    out = []
    for lo, hi in best.values():
        out += [lo[1], hi[1]]
    return list(dict.fromkeys(out))


@dataclass
class QuasiBernoulliReport:
    max_len: int
    min_ratio: object
    max_ratio: object
    argmin: object
    argmax: object


def witness_ratios(measure, nmax, head=(2,), body=0):
    """eta[[h b^{n-1}]]/(eta[[h]] eta[[b^{n-1}]]) for n = 2..nmax."""
    out = []
    for n in range(2, nmax + 1):
        w2 = (body,) * (n - 1)
        out.append((n, measure(tuple(head) + w2) / (measure(tuple(head)) * measure(w2))))
    return out


# -- non-Gibbs probe ----------------------------------------------------------------

def probe_letter(m):
    return m + 1 if m >= 3 else 1


def counterexample_probe(model, ns):
    """r_n = |log(mu_*[[m^n c^n]]/(mu_*[[m^n]] mu_*[[c^n]]))|/n with c = m + 1 (m >= 3)."""
    m = model.m
    c = probe_letter(m)
    out = []
    for n in ns:
        a = (m,) * n
        b = (c,) * n
        r = mu_star(model, a + b) / (mu_star(model, a) * mu_star(model, b))
        out.append((n, abs(math.log(float(r))) / n))
    return out


def fitted_floor(rs):
    """Positive floor estimate: the minimum of the tail half of r_n."""
    vals = [r for _, r in rs]
    return min(vals[len(vals) // 2:])
