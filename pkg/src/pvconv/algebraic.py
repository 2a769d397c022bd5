"""Exact arithmetic in Z[beta] with rigorous real enclosures.

Elements are residue polynomials c0 + c1*beta + ... + c_{s-1}*beta^{s-1}
with integer coefficients.  Signs are decided by evaluating the residue
polynomial on a rational interval around beta, bisecting until the image
interval excludes zero.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import ceil, floor

import mpmath
import sympy


class FieldError(ValueError):
    pass


class PrecisionError(ArithmeticError):
    pass


def _peval(poly, x):
    # poly is descending
    acc = 0
    for c in poly:
        acc = acc * x + c
    return acc


def _round_down(x, denom=2**64):
    return Fraction(floor(Fraction(x) * denom), denom)


def _round_up(x, denom=2**64):
    return Fraction(ceil(Fraction(x) * denom), denom)


def _mp_fraction(x):
    """Exact Fraction of an mpf (mpf values are dyadic)."""
    man, exp = mpmath.mpf(x).man_exp
    man = int(man)
    return Fraction(man * 2**exp) if exp >= 0 else Fraction(man, 2**-exp)


class NumberField:
    """Q(beta) for the real root beta > 1 of a monic integer polynomial.

    ``poly`` lists coefficients from the leading one down to the constant
    term.  ``hint`` selects the root when several real roots exceed 1.
    """

    HARD_CAP_BITS = 4000

    def __init__(self, poly, hint=None, check_irreducible=True):
        poly = list(poly)
        if not poly or any(not isinstance(c, int) for c in poly):
            raise FieldError("polynomial coefficients must be integers")
        while len(poly) > 1 and poly[0] == 0:
            poly.pop(0)
        if len(poly) < 2:
            raise FieldError("polynomial must have degree >= 1")
        if poly[0] != 1:
            raise FieldError("polynomial must be monic")
        self.poly = tuple(poly)
        self.degree = len(poly) - 1
        # x^s = -(a_{s-1} x^{s-1} + ... + a_0), ascending
        self._reduction = tuple(-c for c in reversed(poly[1:]))

        x = sympy.Symbol("x")
        spoly = sympy.Poly(list(poly), x)
        self.irreducible = bool(spoly.is_irreducible) if check_irreducible else None
        if check_irreducible and not self.irreducible:
            raise FieldError("polynomial is reducible over Q")

        with mpmath.workdps(60):
            roots = mpmath.polyroots([mpmath.mpf(c) for c in poly], maxsteps=400, extraprec=200)
            real = [r for r in roots if abs(mpmath.im(r)) < mpmath.mpf(10) ** -40 and mpmath.re(r) > 1]
            if not real:
                raise FieldError("no real root > 1")
            real = [mpmath.re(r) for r in real]
            target = real[0] if hint is None else min(real, key=lambda r: abs(r - hint))
            eps = mpmath.mpf(10) ** -30
            lo, hi = _mp_fraction(target - eps), _mp_fraction(target + eps)
            if _peval(self.poly, lo) * _peval(self.poly, hi) > 0:
                raise FieldError("could not bracket the root")
            if lo <= 1:
                raise FieldError("designated root is not > 1")
            self._lo_sign = 1 if _peval(self.poly, lo) > 0 else -1
            self._levels = [(lo, hi)]

            others = list(roots)
            idx = min(range(len(others)), key=lambda k: abs(others[k] - target))
            others.pop(idx)
            dp = [c * (self.degree - k) for k, c in enumerate(poly[:-1])]
            moduli = []
            for z in others:
                pz = mpmath.polyval([mpmath.mpf(c) for c in poly], z)
                dz = mpmath.polyval([mpmath.mpf(c) for c in dp], z)
                # a root of p lies within deg*|p/p'| of z
                rad = self.degree * abs(pz / dz) + mpmath.mpf(10) ** -40
                lo_m = max(abs(z) - rad, 0)
                hi_m = abs(z) + rad
                moduli.append((_round_down(_mp_fraction(lo_m)), _round_up(_mp_fraction(hi_m))))
        self.conjugate_moduli = tuple(sorted(moduli))
        self.is_pv = all(hi < 1 for _, hi in self.conjugate_moduli)
        self.hint = hint

    # -- enclosure -------------------------------------------------------
    @property
    def beta_enclosure(self):
        return self._levels[0]

    def enclosure(self, level):
        """Enclosure of beta after ``level`` bisections beyond the initial one."""
        while len(self._levels) <= level:
            lo, hi = self._levels[-1]
            mid = (lo + hi) / 2
            s = _peval(self.poly, mid)
            if s == 0:
                self._levels.append((mid, mid))
            elif (s > 0) == (self._lo_sign > 0):
                self._levels.append((mid, hi))
            else:
                self._levels.append((lo, mid))
        return self._levels[level]

    @property
    def beta_float(self):
        lo, hi = self._levels[0]
        return float((lo + hi) / 2)

    def beta_mp(self, dps=50):
        lo, hi = self.enclosure(max(0, int(dps * 3.33) - 100))
        return mpmath.mpf(lo.numerator) / lo.denominator

    # -- elements --------------------------------------------------------
    def element(self, coeffs):
        return AlgebraicNumber(self, coeffs)

    def from_integer(self, n):
        return AlgebraicNumber(self, [n])

    @property
    def beta(self):
        return AlgebraicNumber(self, [0, 1])

    @property
    def one(self):
        return self.from_integer(1)

    @property
    def zero(self):
        return self.from_integer(0)

    def reduce(self, coeffs):
        c = list(coeffs)
        s = self.degree
        while len(c) > s:
            top = c.pop()
            if top:
                base = len(c) - s
                for k, r in enumerate(self._reduction):
                    c[base + k] += top * r
        c += [0] * (s - len(c))
        return tuple(c)

    def descriptor(self):
        return poly_to_str(self.poly) + ("@%s" % self.hint if self.hint is not None else "")

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.poly == other.poly and self.beta_enclosure == other.beta_enclosure

    def __hash__(self):
        return hash(self.poly)

    def __repr__(self):
        return "NumberField(%s, beta~%.12g)" % (poly_to_str(self.poly), self.beta_float)


def make_field(poly, which_root=None):
    return NumberField(poly, which_root)


def poly_to_str(poly, var="x"):
    """Descending coefficients to a compact string like 'x^2-5x-3'."""
    s = len(poly) - 1
    out = []
    for k, c in enumerate(poly):
        e = s - k
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if e == 0:
            body = str(a)
        else:
            body = ("" if a == 1 else str(a)) + var + ("" if e == 1 else "^%d" % e)
        out.append((sign, body))
    if not out:
        return "0"
    text = ("-" if out[0][0] == "-" else "") + out[0][1]
    for sign, body in out[1:]:
        text += sign + body
    return text


def parse_field(desc):
    """Parse a descriptor like ``"x^2-x-1@1.6"``."""
    if "@" in desc:
        ptxt, htxt = desc.split("@", 1)
        hint = float(htxt)
    else:
        ptxt, hint = desc, None
    from sympy.parsing.sympy_parser import (convert_xor, implicit_multiplication_application,
                                            parse_expr, standard_transformations)
    if not re.fullmatch(r"[0-9x^*+\-\s()]+", ptxt):
        raise FieldError("malformed polynomial %r" % ptxt)
    x = sympy.Symbol("x")
    try:
        expr = parse_expr(ptxt, local_dict={"x": x},
                          transformations=standard_transformations + (implicit_multiplication_application, convert_xor))
        coeffs = sympy.Poly(expr, x).all_coeffs()
    except (sympy.SympifyError, SyntaxError, TypeError, sympy.PolynomialError) as exc:
        raise FieldError("malformed polynomial %r" % ptxt) from exc
    if any(not c.is_integer for c in coeffs):
        raise FieldError("polynomial coefficients must be integers")
    field = NumberField([int(c) for c in coeffs], hint)
    field.hint = htxt if "@" in desc else None
    return field


def _interval_eval(coeffs, lo, hi):
    """Range of sum c_k t^k over t in [lo, hi] with 0 < lo."""
    a = b = Fraction(0)
    plo = phi = Fraction(1)
    for c in coeffs:
        if c > 0:
            a += c * plo
            b += c * phi
        elif c < 0:
            a += c * phi
            b += c * plo
        plo *= lo
        phi *= hi
    return a, b


class AlgebraicNumber:
    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        self.field = field
        self.coeffs = field.reduce(int(c) for c in coeffs)

    def _check(self, other):
        if isinstance(other, int):
            return AlgebraicNumber(self.field, [other])
        if not isinstance(other, AlgebraicNumber):
            return NotImplemented
        if other.field is not self.field and other.field != self.field:
            raise FieldError("field mismatch")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return AlgebraicNumber(self.field, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return AlgebraicNumber(self.field, [-a for a in self.coeffs])

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return AlgebraicNumber(self.field, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        prod = [0] * (2 * self.field.degree - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    prod[i + j] += a * b
        return AlgebraicNumber(self.field, prod)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power in Z[beta]")
        out = self.field.one
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = AlgebraicNumber(self.field, [other])
        return isinstance(other, AlgebraicNumber) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def is_zero(self):
        return not any(self.coeffs)

    def height(self):
        return max(abs(c) for c in self.coeffs)

    def interval(self, level=0):
        lo, hi = self.field.enclosure(level)
        return _interval_eval(self.coeffs, lo, hi)

    def sign(self):
        if self.is_zero():
            return 0
        gb = None
        level = 0
        while True:
            a, b = self.interval(level)
            if a > 0:
                return 1
            if b < 0:
                return -1
            if self.field.is_pv:
                if gb is None:
                    gb = garsia_bound(self.field, max(self.height(), 1))
                if b - a < gb:
                    raise PrecisionError("enclosure below the separation bound still contains 0")
            level += 8
            if level > NumberField.HARD_CAP_BITS:
                raise PrecisionError("sign refinement exceeded the precision cap")

    def __lt__(self, other):
        return compare(self, other) < 0

    def __le__(self, other):
        return compare(self, other) <= 0

    def __gt__(self, other):
        return compare(self, other) > 0

    def __ge__(self, other):
        return compare(self, other) >= 0

    def __float__(self):
        return float(self.to_mp())

    def to_mp(self, dps=30):
        with mpmath.workdps(dps + 10):
            b = self.field.beta_mp(dps + 10)
            return mpmath.fsum(c * b**k for k, c in enumerate(self.coeffs))

    def __str__(self):
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            if k == 0:
                body = str(abs(c))
            else:
                body = ("" if abs(c) == 1 else str(abs(c))) + ("b" if k == 1 else "b^%d" % k)
            terms.append(("-" if c < 0 else "+", body))
        if not terms:
            return "0"
        text = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for s, body in terms[1:]:
            text += s + body
        return text

    def __repr__(self):
        return "AlgebraicNumber(%s)" % self


def sign(x):
    return x.sign()


def compare(x, y):
    if isinstance(x, RationalCombination) or isinstance(y, RationalCombination):
        return RationalCombination.coerce(x).compare(y)
    if isinstance(y, int):
        y = x.field.from_integer(y)
    if isinstance(x, int):
        x = y.field.from_integer(x)
    return (x - y).sign()


def garsia_bound(field, M):
    """Lower bound (1/M^{s-1}) prod(1 - |beta_k|) on |A(beta)| for nonzero A of height <= M."""
    if M < 1:
        raise ValueError("M must be >= 1")
    if not field.is_pv:
        raise FieldError("field is not PV")
    prod = Fraction(1)
    for _, hi in field.conjugate_moduli:
        prod *= 1 - hi
    return prod / Fraction(M) ** (field.degree - 1)


def _solve_fraction(A, b):
    """Solve A x = b over Q by Gauss-Jordan elimination."""
    n = len(A)
    M = [list(map(Fraction, row)) + [Fraction(v)] for row, v in zip(A, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        M[col], M[piv] = M[piv], M[col]
        pv = M[col][col]
        M[col] = [v / pv for v in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [a - f * c for a, c in zip(M[r], M[col])]
    return [M[r][n] for r in range(n)]


class RationalCombination:
    """Element of Q(beta) stored as numerator / denominator.

    The canonical form has an integer-coefficient numerator and a positive
    integer denominator with no common content.
    """

    __slots__ = ("numerator", "denominator")

    def __init__(self, numerator, denominator=1):
        if isinstance(denominator, AlgebraicNumber):
            if denominator.is_zero():
                raise ZeroDivisionError("zero denominator")
            inv = _inverse(denominator)
            field = denominator.field
            rat = [Fraction(c) for c in numerator.coeffs]
            prod = [Fraction(0)] * (2 * field.degree - 1)
            for i, a in enumerate(rat):
                for j, b in enumerate(inv):
                    prod[i + j] += a * b
            self._set_from_rational(field, _reduce_rational(field, prod))
        else:
            if denominator == 0:
                raise ZeroDivisionError("zero denominator")
            field = numerator.field
            self._set_from_rational(field, [Fraction(c, 1) / Fraction(denominator) for c in numerator.coeffs])

    def _set_from_rational(self, field, coeffs):
        from math import gcd, lcm
        den = 1
        for c in coeffs:
            den = lcm(den, c.denominator)
        nums = [int(c * den) for c in coeffs]
        g = den
        for v in nums:
            g = gcd(g, v)
        g = g or 1
        self.numerator = AlgebraicNumber(field, [v // g for v in nums])
        self.denominator = den // g

    @classmethod
    def coerce(cls, x):
        if isinstance(x, RationalCombination):
            return x
        if isinstance(x, AlgebraicNumber):
            return cls(x)
        raise TypeError("cannot coerce %r" % (x,))

    @classmethod
    def from_rational_coeffs(cls, field, coeffs):
        obj = cls.__new__(cls)
        obj._set_from_rational(field, [Fraction(c) for c in coeffs])
        return obj

    @property
    def field(self):
        return self.numerator.field

    def rational_coeffs(self):
        return [Fraction(c, self.denominator) for c in self.numerator.coeffs]

    def _other(self, other):
        if isinstance(other, int):
            return RationalCombination(self.field.from_integer(other))
        if isinstance(other, Fraction):
            return RationalCombination(self.field.from_integer(other.numerator), other.denominator)
        if isinstance(other, AlgebraicNumber):
            return RationalCombination(other)
        if isinstance(other, RationalCombination):
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        num = self.numerator * o.denominator + o.numerator * self.denominator
        return RationalCombination(num, self.denominator * o.denominator)

    __radd__ = __add__

    def __neg__(self):
        return RationalCombination(-self.numerator, self.denominator)

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return RationalCombination(self.numerator * o.numerator, self.denominator * o.denominator)

    __rmul__ = __mul__

    def inverse(self):
        return RationalCombination(self.field.from_integer(self.denominator), self.numerator)

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._other(other) * self.inverse()

    def __pow__(self, n):
        out = RationalCombination(self.field.one)
        base = self if n >= 0 else self.inverse()
        for _ in range(abs(n)):
            out = out * base
        return out

    def sign(self):
        return self.numerator.sign()

    def compare(self, other):
        o = self._other(other)
        # denominators are positive integers, so clear them
        return (self.numerator * o.denominator - o.numerator * self.denominator).sign()

    def __eq__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return False
        return self.numerator == o.numerator and self.denominator == o.denominator

    def __hash__(self):
        return hash((self.numerator.coeffs, self.denominator))

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __ge__(self, other):
        return self.compare(other) >= 0

    def __float__(self):
        return float(self.to_mp())

    def to_mp(self, dps=30):
        with mpmath.workdps(dps + 10):
            return self.numerator.to_mp(dps) / self.denominator

    def interval(self, level=0):
        a, b = self.numerator.interval(level)
        return a / self.denominator, b / self.denominator

    def __str__(self):
        if self.denominator == 1:
            return str(self.numerator)
        return "(%s)/%d" % (self.numerator, self.denominator)

    def __repr__(self):
        return "RationalCombination(%s)" % self


def _reduce_rational(field, coeffs):
    c = list(coeffs)
    s = field.degree
    while len(c) > s:
        top = c.pop()
        if top:
            base = len(c) - s
            for k, r in enumerate(field._reduction):
                c[base + k] += top * r
    c += [Fraction(0)] * (s - len(c))
    return c


def _inverse(x):
    """Rational coefficients of 1/x, via the multiplication-by-x matrix."""
    field = x.field
    s = field.degree
    cols = []
    for k in range(s):
        e = [0] * s
        e[k] = 1
        cols.append((x * AlgebraicNumber(field, e)).coeffs)
    A = [[cols[k][r] for k in range(s)] for r in range(s)]
    rhs = [1] + [0] * (s - 1)
    return _solve_fraction(A, rhs)
