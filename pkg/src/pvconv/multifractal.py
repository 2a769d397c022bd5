"""L^q spectrum, Legendre transform, local dimensions, and the Erdos domain check."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.special import logsumexp

from . import betanet
from .measures import ErdosModel, MMeasure, MultinacciModel

GOLDEN = (1 + 5 ** 0.5) / 2


@dataclass
class NetMeasure:
    """A measure on a net whose basic intervals have lengths base * beta^{-e(w)}."""

    measure: MMeasure
    exponents: list          # per-letter exponent (length factor beta^{-e})
    beta: float
    base: float = 1.0
    name: str = ""

    def length(self, word):
        return self.base * self.beta ** -sum(self.exponents[c] for c in word)


def lebesgue_net(exponents, beta, base=1.0):
    """Lebesgue measure (normalized to the base length) as a 1x1 M-measure."""
    mats = [np.array([[beta ** -e]]) for e in exponents]
    meas = MMeasure(mats, np.array([1.0]), np.array([1.0]), False, name="lebesgue")
    return NetMeasure(meas, list(exponents), beta, base, "lebesgue")


def multinacci_exponents(m):
    return [len(betanet.multinacci_word(m, j)) for j in range(m * (m - 1) + 1)]


def mu_star_net(m, p):
    model = MultinacciModel(m, float(p))
    beta = betanet.multinacci_field(m).beta_float
    return NetMeasure(model.measure(), multinacci_exponents(m), beta, 1.0, "mu_star")


def erdos_net(p, which="mu"):
    model = ErdosModel(float(p))
    meas = model.mu if which == "mu" else model.mu_tilde_star
    return NetMeasure(meas, [2, 3, 2], GOLDEN, GOLDEN, "erdos_" + which)


def multinacci_mu_net(m, p):
    from .measures import multinacci_mu
    bc = multinacci_mu(m, float(p))
    return NetMeasure(bc.measure, multinacci_exponents(m), bc.field.beta_float, 1.0, "mu")


@dataclass
class PartitionLevels:
    """Stopping-time partitions at scales r_k = base * beta^{-(k + 1/2)}, k = 0..K."""

    K: int
    log_r: np.ndarray
    logvals: list            # per scale: array of log eta[[w]]
    lengths: list            # per scale: array of exponents
    counts: list


def stopping_time_partitions(nm: NetMeasure, K):
    """Breadth-first sweep of the net; a word with exponent e whose parent has
    exponent e_p belongs to the partitions of scales e_p <= k <= e - 1."""
    meas = nm.measure
    J = meas.alphabet
    R = np.asarray(meas.R, dtype=float)
    logvals = [[] for _ in range(K + 1)]
    lens = [[] for _ in range(K + 1)]
    # frontier: rows (n, dim) with exponents
    dim = R.shape[0]
    if meas.heads is not None:
        rows0 = np.stack([np.asarray(h, dtype=float) for h in meas.heads])
    else:
        L = np.asarray(meas.L, dtype=float).reshape(1, -1)
        rows0 = np.concatenate([L @ np.asarray(M, dtype=float) for M in meas.matrices])
    exps = np.asarray(nm.exponents)
    rows = rows0
    e = exps.copy()
    ep = np.zeros(J, dtype=int)
    stack = np.stack([np.asarray(M, dtype=float) for M in meas.matrices])
    while len(rows):
        vals = rows @ R
        with np.errstate(divide="ignore"):
            lv = np.log(vals)
        for k in range(K + 1):
            sel = (ep <= k) & (k <= e - 1)
            if sel.any():
                logvals[k].append(lv[sel])
                lens[k].append(e[sel])
        grow = e <= K
        if not grow.any():
            break
        rows, e = rows[grow], e[grow]
        rows = np.einsum("na,jab->njb", rows, stack).reshape(-1, dim)
        ep = np.repeat(e, J)
        e = ep + np.tile(exps, len(e))
    log_r = np.log(nm.base) - (np.arange(K + 1) + 0.5) * np.log(nm.beta)
    lv = [np.concatenate(x) if x else np.zeros(0) for x in logvals]
    le = [np.concatenate(x) if x else np.zeros(0, dtype=int) for x in lens]
    return PartitionLevels(K, log_r, lv, le, [len(x) for x in lv])


def check_tiling(nm: NetMeasure, levels: PartitionLevels, tol=1e-9):
    """Total length of each stopping-time partition equals the base length."""
    out = []
    for k in range(levels.K + 1):
        total = float(np.sum(nm.beta ** -levels.lengths[k].astype(float))) * nm.base
        out.append(abs(total - nm.base) <= tol * nm.base)
    return all(out)


def _partition_sums(levels, q):
    out = []
    for lv in levels.logvals:
        lv = lv[np.isfinite(lv)]
        out.append(logsumexp(q * lv) if len(lv) else -np.inf)
    return np.array(out)


def _fit(x, y):
    slope, icpt = np.polyfit(x, y, 1)
    resid = y - (slope * x + icpt)
    return slope, float(np.max(np.abs(resid)))


def tau_from_levels(levels, q, window=4):
    """Slope of log sum eta^q vs log r over the deepest ``window`` scales.

    The error bar combines the slope change when the window is shifted one
    scale coarser with the largest fit residual divided by the log-scale span.
    """
    S = _partition_sums(levels, q)
    x = levels.log_r
    K = levels.K
    sl = slice(K + 1 - window, K + 1)
    tau, res = _fit(x[sl], S[sl])
    sl2 = slice(K - window, K)
    tau2, _ = _fit(x[sl2], S[sl2])
    span = abs(x[sl][0] - x[sl][-1])
    err = abs(tau - tau2) + res / span
    return float(tau), float(err)


def tau_estimate(nm: NetMeasure, q, levels=14, window=4):
    return tau_from_levels(stopping_time_partitions(nm, levels), q, window)


@dataclass
class SpectrumEstimate:
    q: np.ndarray
    tau: np.ndarray
    err: np.ndarray
    hull_tau: np.ndarray = None
    alpha: np.ndarray = None
    f: np.ndarray = None
    alpha_min: float = None
    alpha_max: float = None
    alpha_min_err: float = None
    alpha_max_err: float = None
    meta: dict = field(default_factory=dict)


def q_grid(qmin=-20.0, qmax=20.0, step=0.25):
    n = int(round((qmax - qmin) / step))
    return qmin + step * np.arange(n + 1)


def spectrum(nm: NetMeasure, depth=14, qs=None, window=4):
    qs = q_grid() if qs is None else np.asarray(qs, dtype=float)
    lev = stopping_time_partitions(nm, depth)
    taus, errs = zip(*(tau_from_levels(lev, q, window) for q in qs))
    est = SpectrumEstimate(qs, np.array(taus), np.array(errs))
    legendre(est)
    # endpoint slopes one scale coarser give an error bar for alpha_min/max
    lev2 = PartitionLevels(depth - 1, lev.log_r[:-1], lev.logvals[:-1], lev.lengths[:-1], lev.counts[:-1])
    taus2 = np.array([tau_from_levels(lev2, q, window)[0] for q in qs])
    h2 = upper_hull(qs, taus2)
    s2 = np.diff(h2) / np.diff(qs)
    est.alpha_max_err = abs(s2[0] - est.alpha_max)
    est.alpha_min_err = abs(s2[-1] - est.alpha_min)
    est.meta = {"depth": depth, "window": window, "qmin": float(qs[0]), "qmax": float(qs[-1]),
                "qstep": float(qs[1] - qs[0]) if len(qs) > 1 else 0.0, "measure": nm.name}
    return est


def upper_hull(x, y):
    """Values at x of the least concave majorant of the points (x, y)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    hull = []
    for i in range(len(x)):
        while len(hull) >= 2:
            a, b = hull[-2], hull[-1]
            # drop b if it lies on or below the chord a -> i
            if (y[b] - y[a]) * (x[i] - x[a]) <= (y[i] - y[a]) * (x[b] - x[a]):
                hull.pop()
            else:
                break
        hull.append(i)
    return np.interp(x, x[hull], y[hull])


def legendre(est: SpectrumEstimate):
    """f(alpha) = inf_q (alpha q - tau(q)) on the concave hull of tau."""
    qs, tau = est.q, est.tau
    if len(qs) < 3:
        raise ValueError("need at least 3 grid points")
    h = upper_hull(qs, tau)
    slopes = np.diff(h) / np.diff(qs)
    alphas = np.unique(np.round(slopes, 12))
    f = np.array([np.min(a * qs - h) for a in alphas])
    est.hull_tau, est.alpha, est.f = h, alphas, f
    est.alpha_max = float(slopes[0])
    est.alpha_min = float(slopes[-1])
    return alphas, f


def inverse_legendre(alphas, f, qs):
    """tau(q) = inf_alpha (alpha q - f(alpha))."""
    return np.array([np.min(alphas * q - f) for q in qs])


def box_count_tau(p, q, N=30, bins_exp=(10, 16)):
    """Independent L^q estimate for the Erdos measure: exact law of the
    N-digit partial sums, binned into 2^k equal boxes of [0, beta]."""
    from .algebraic import parse_field
    field = parse_field("x^2-x-1@1.6")
    s = 2
    red = np.array(field._reduction, dtype=np.int64)
    Y = np.zeros((1, s), dtype=np.int64)
    mass = np.ones(1)
    probs = np.array([float(p), 1 - float(p)])
    for _ in range(N):
        sh = np.zeros_like(Y)
        sh[:, 1:] = Y[:, :-1]
        sh += np.outer(Y[:, -1], red)
        nY = np.repeat(sh, 2, axis=0)
        nY[:, 0] += np.tile(np.arange(2, dtype=np.int64), len(Y))
        nm = np.repeat(mass, 2) * np.tile(probs, len(Y))
        Y, inv = np.unique(nY, axis=0, return_inverse=True)
        mass = np.zeros(len(Y))
        np.add.at(mass, inv.reshape(-1), nm)
    x = (Y @ np.array([1.0, GOLDEN])) * GOLDEN ** -N
    ks = np.arange(bins_exp[0], bins_exp[1] + 1)
    logS, logr = [], []
    for k in ks:
        nb = 2 ** int(k)
        idx = np.minimum((x / GOLDEN * nb).astype(np.int64), nb - 1)
        box = np.bincount(idx, weights=mass, minlength=nb)
        box = box[box > 0]
        logS.append(logsumexp(q * np.log(box)))
        logr.append(math.log(GOLDEN / nb))
    slope, _ = _fit(np.array(logr[-4:]), np.array(logS[-4:]))
    return float(slope)


def local_dimension(nm: NetMeasure, stream, n):
    """Per-level slopes log eta[[w_<k]] / log |[[w_<k]]|, k = 1..n."""
    word = []
    out = []
    it = iter(stream)
    for k in range(1, n + 1):
        word.append(next(it))
        v = float(nm.measure(tuple(word)))
        if v <= 0:
            raise ValueError("zero measure on the nest")
        out.append(math.log(v) / math.log(nm.length(word)))
    return out


def extreme_dimension(levels: PartitionLevels, which="max", window=6):
    """Direct estimate of alpha_max (or alpha_min) from the extreme partition masses.

    log(min eta) is regressed on log r with a (-1)^k term, which absorbs the
    period-two oscillation of the lattice counts.  The error bar is the
    slope change when the window moves two scales coarser plus the largest
    residual over the log-scale span.
    """
    ext = []
    for lv in levels.logvals:
        lv = lv[np.isfinite(lv)]
        ext.append(lv.min() if which == "max" else lv.max())
    ext = np.array(ext)
    ks = np.arange(levels.K + 1)

    def fit(lo, hi):
        x, y, k = levels.log_r[lo:hi], ext[lo:hi], ks[lo:hi]
        A = np.stack([x, np.ones_like(x), (-1.0) ** k], 1)
        c, *_ = np.linalg.lstsq(A, y, rcond=None)
        return c[0], float(np.max(np.abs(A @ c - y))), abs(x[0] - x[-1])

    K = levels.K
    if K + 1 < window + 2:
        raise ValueError("depth too small for the extreme-dimension fit")
    s0, res, span = fit(K + 1 - window, K + 1)
    s1, _, _ = fit(K - 1 - window, K - 1)
    return float(s0), float(abs(s0 - s1) + res / span)


def erdos_alpha_star(p):
    """max(log p, log q)/log(1/beta) read as the larger local dimension, log min(p,q)/log(1/beta)."""
    p = float(p)
    return math.log(min(p, 1 - p)) / math.log(1 / GOLDEN)


def erdos_alpha_bound(p):
    p = float(p)
    return math.log(p * (1 - p)) / (2 * math.log(1 / GOLDEN))


def erdos_domain_check(p, depth=14, estimate=True):
    """Disconnection diagnostic for Dom(mu) vs Dom(mu_*), Erdos measure.

    alpha* > bound holds iff min(p,q)^2 < pq iff p != q; this is decided
    exactly for rational p.  The numerical alpha_max of tilde-mu_* is
    attached with its error bar.
    """
    pf = Fraction(p).limit_denominator(10 ** 12) if not isinstance(p, Fraction) else p
    qf = 1 - pf
    strict = min(pf, qf) ** 2 < pf * qf
    out = {"p": float(pf), "alpha_star": erdos_alpha_star(pf), "bound": erdos_alpha_bound(pf),
           "strict_gap": bool(strict)}
    if estimate:
        lev = stopping_time_partitions(erdos_net(float(pf), "tilde_star"), depth)
        amax, err = extreme_dimension(lev, "max")
        out["alpha_max_estimate"] = amax
        out["alpha_max_err"] = err
        gap = out["alpha_star"] - amax
        out["gap_over_err"] = gap / err if err > 0 else math.inf
        out["verdict"] = "disconnected" if strict and gap >= 10 * err else "connected"
    else:
        out["verdict"] = "disconnected" if strict else "connected"
    return out


def kink_scan(est: SpectrumEstimate, qlo=-8.0, qhi=-2.0):
    """Second differences of tau over [qlo, qhi] (exploratory)."""
    sel = (est.q >= qlo) & (est.q <= qhi)
    q, t = est.q[sel], est.tau[sel]
    d2 = np.diff(t, 2) / np.diff(q)[:-1] ** 2
    k = int(np.argmax(np.abs(d2))) if len(d2) else 0
    return {"q": q[1:-1].tolist(), "d2tau": d2.tolist(), "q_max_curvature": float(q[1:-1][k]) if len(d2) else None}
