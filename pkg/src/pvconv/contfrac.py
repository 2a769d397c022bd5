"""Generalized continued fractions driven by alpha and a parity bit kappa.

u_n = alpha + ... + alpha^{a_n}, v_n = alpha^{a_n} when n + kappa is even,
and the same with 1/alpha when n + kappa is odd (u_0 = 0 when a_0 = 0).
p_n/q_n follows the three-term recursion seeded by (p_{-1}, q_{-1}) = (1, 0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import count

import numpy as np


class CFError(ValueError):
    pass


@dataclass(frozen=True)
class CFParams:
    alpha: float | Fraction
    kappa: int
    digits: tuple

    def __post_init__(self):
        if self.alpha <= 0:
            raise CFError("alpha must be positive")
        if self.kappa not in (0, 1):
            raise CFError("kappa must be 0 or 1")
        if self.digits and self.digits[0] < 0:
            raise CFError("a_0 must be >= 0")
        if any(a <= 0 for a in self.digits[1:]):
            raise CFError("a_i must be > 0 for i >= 1")

    @property
    def exact(self):
        return isinstance(self.alpha, (int, Fraction))

    @property
    def rho(self):
        a = float(self.alpha)
        return min(math.sqrt(a), 1 / math.sqrt(a))


def uv(alpha, kappa, n, a):
    """(u_n, v_n) for digit a at index n."""
    r = alpha if (n + kappa) % 2 == 0 else 1 / alpha
    if a == 0:
        return 0 * r, 1 + 0 * r
    if r == 1:
        return a * r, r
    u = r * (r ** a - 1) / (r - 1)
    return u, r ** a


def uv_sequence(params, upto=None):
    digits = params.digits if upto is None else params.digits[:upto + 1]
    return [uv(params.alpha, params.kappa, n, a) for n, a in enumerate(digits)]


@dataclass
class CFState:
    """Last two columns (p_n, q_n), (p_{n-1}, q_{n-1}) plus log of the common scale."""

    p: object
    q: object
    p1: object
    q1: object
    n: int
    v: object          # v_n, needed by the next step
    logscale: float = 0.0


def run(params, n=None, renorm=32):
    """Iterate the recursion through index n; returns the final CFState and
    the list of log delta_n values (n >= 1)."""
    n = len(params.digits) - 1 if n is None else n
    if n >= len(params.digits):
        raise CFError("digits available only through index %d" % (len(params.digits) - 1))
    seq = uv_sequence(params, n)
    u0, v0 = seq[0]
    st = CFState(u0, 1 + 0 * u0, 1 + 0 * u0, 0 * u0, 0, v0)
    logprod_v = 0.0   # log of v_0 ... v_{k-1}
    deltas = []
    for k in range(1, n + 1):
        uk, vk = seq[k]
        logprod_v += math.log(float(st.v))
        p = uk * st.p + st.v * st.p1
        q = uk * st.q + st.v * st.q1
        st = CFState(p, q, st.p, st.q, k, vk, st.logscale)
        # delta_k = v_0...v_{k-1} / (q_k q_{k-1})
        deltas.append(logprod_v - math.log(float(st.q)) - math.log(float(st.q1)) - 2 * st.logscale)
        if not params.exact and k % renorm == 0:
            s = max(abs(st.p), abs(st.q), abs(st.p1), abs(st.q1))
            st.p, st.q, st.p1, st.q1 = st.p / s, st.q / s, st.p1 / s, st.q1 / s
            st.logscale += math.log(s)
    return st, deltas


def cf_eval(params, n=None):
    st, _ = run(params, n)
    return st.p / st.q


def cf_eval_vector(params, n, x, y):
    """Q_kappa(a_0..a_n) (x, y)^T as a ratio: (p_n x + v_n p_{n-1} y)/(q_n x + v_n q_{n-1} y)."""
    if x < 0 or y < 0 or (x == 0 and y == 0):
        raise CFError("(x, y) must be nonnegative and nonzero")
    st, _ = run(params, n)
    num = st.p * x + st.v * st.p1 * y
    den = st.q * x + st.v * st.q1 * y
    if den == 0:
        raise CFError("q_n(x, y) = 0")
    return num / den


def delta_n(params, n):
    """|p_n/q_n - p_{n-1}/q_{n-1}| = v_0...v_{n-1}/(q_n q_{n-1})."""
    if n < 1:
        raise CFError("delta_n needs n >= 1")
    if params.exact:
        st, _ = run(params, n)
        return abs(st.p / st.q - st.p1 / st.q1)
    _, deltas = run(params, n)
    return math.exp(deltas[n - 1])


def deltas(params, n=None):
    """All delta_1..delta_n (floats), one pass."""
    _, logs = run(params, n)
    return [math.exp(x) for x in logs]


def matrix_product(params, n=None):
    """Direct product of the 2x2 matrices (u_k v_k; 1 0), k = 0..n (floats)."""
    n = len(params.digits) - 1 if n is None else n
    M = np.eye(2)
    logs = 0.0
    for u, v in uv_sequence(params, n):
        M = M @ np.array([[float(u), float(v)], [1.0, 0.0]])
        s = np.abs(M).max()
        M /= s
        logs += math.log(s)
    return M, logs


def gap_bound(params, n):
    """rho^{a_1+...+a_n} / rho^{2 + 2 a_0 + a_n} (alpha != 1)."""
    rho = params.rho
    if rho >= 1:
        raise CFError("exponential bound needs alpha != 1")
    a = params.digits
    return rho ** (sum(a[1:n + 1]) - 2 - 2 * a[0] - a[n])


def regular_bound(params, n, include_a0=True):
    """1/(a_0 + ... + a_n) (alpha = 1).

    With ``include_a0=False`` the sum starts at a_1; that form always holds
    since delta_n = 1/(q_n q_{n-1}) does not involve a_0.
    """
    if params.alpha != 1:
        raise CFError("regular-CF bound needs alpha = 1")
    return 1 / sum(params.digits[0 if include_a0 else 1:n + 1])


def parity_gap_bound(params, n):
    """rho^{a_1+...+a_n} / rho^{2 + 2 a_0}, or None when the parity case does not apply.

    Applies when n + kappa is even with alpha > 1, or odd with alpha < 1.
    """
    rho = params.rho
    if rho >= 1:
        raise CFError("exponential bound needs alpha != 1")
    even = (n + params.kappa) % 2 == 0
    if even != (params.alpha > 1):
        return None
    a = params.digits
    return rho ** (sum(a[1:n + 1]) - 2 - 2 * a[0])


def truncation_bound(params, n, a):
    """(K/rho^{2 a_0}) rho^{a_1+...+a_{n-1}+a} with K = 1/(rho^2 (1 - rho))."""
    rho = params.rho
    if rho >= 1:
        raise CFError("exponential bound needs alpha != 1")
    K = 1 / (rho * rho * (1 - rho))
    d = params.digits
    return K / rho ** (2 * d[0]) * rho ** (sum(d[1:n]) + a)


def _tail_limit_u(alpha, kappa, n):
    """lim_k u_n(k): None when it diverges, else r/(1-r)."""
    r = alpha if (n + kappa) % 2 == 0 else 1 / alpha
    if r >= 1:
        return None
    return r / (1 - r)


def cf_limit(params, tail="inf", tol=1e-13, stream=None, max_terms=100000):
    """[kappa | a_0; a_1, ..., a_n, inf] or the limit along an infinite digit stream.

    With ``tail == "inf"`` the last digit tends to infinity; u_{n+1} then
    either diverges (value p_n/q_n) or converges to r/(1 - r) with
    v_{n+1} -> 0, giving the vector-terminated value at (r/(1-r), 1).
    With a ``stream`` (an iterable of further digits) the fraction is
    extended until delta_n < tol.
    """
    if stream is None:
        n = len(params.digits) - 1
        if n < 0:
            raise CFError("need at least a_0")
        U = _tail_limit_u(params.alpha, params.kappa, n + 1)
        if U is None:
            return cf_eval(params, n)
        return cf_eval_vector(params, n, U, 1)
    digits = list(params.digits)
    it = iter(stream)
    alpha = float(params.alpha)
    fparams = CFParams(alpha, params.kappa, tuple(digits))
    st, _ = run(fparams)
    prev = st.p / st.q
    for _ in range(max_terms):
        digits.append(next(it))
        fparams = CFParams(alpha, params.kappa, tuple(digits))
        st, logd = run(fparams)
        val = st.p / st.q
        if logd and math.exp(logd[-1]) < tol:
            return val
        prev = val
    raise CFError("no convergence within %d terms" % max_terms)


def periodic(block):
    for k in count():
        yield block[k % len(block)]
