"""beta-expansions of 1, adapted systems of affine contractions, and nets."""

from __future__ import annotations

from dataclasses import dataclass
from math import floor

from .algebraic import NumberField, RationalCombination, parse_field


class AdmissibilityError(ValueError):
    pass


@dataclass(frozen=True)
class BetaExpansionOfOne:
    digits: tuple
    finite_type: bool


def _floor_element(x):
    """floor of an element of Z[beta] (exact)."""
    lo, hi = x.interval(0)
    n = floor(lo)
    while (x - (n + 1)).sign() >= 0:
        n += 1
    while (x - n).sign() < 0:
        n -= 1
    return n


def beta_expansion_of_one(field: NumberField, cap: int = 64) -> BetaExpansionOfOne:
    """Greedy expansion 1 = e1/beta + ... + eT/beta^T."""
    beta = field.beta
    r = field.one
    digits = []
    for _ in range(cap):
        y = beta * r
        e = _floor_element(y)
        digits.append(e)
        r = y - e
        if r.is_zero():
            exp = BetaExpansionOfOne(tuple(digits), True)
            if len(digits) >= 2 and not admissible(exp.digits):
                raise AdmissibilityError("lexicographic conditions fail for %s" % (digits,))
            return exp
    raise RuntimeError("greedy expansion of 1 did not terminate within %d steps" % cap)


def admissible(eps) -> bool:
    """e_i..e_{T-1}(e_T - 1)e_1..e_{i-1} <lex e_1..e_T for 2 <= i <= T."""
    T = len(eps)
    quasi = list(eps[:-1]) + [eps[-1] - 1]
    for i in range(2, T + 1):
        rot = quasi[i - 1:] + list(eps[:i - 1])
        if not tuple(rot) < tuple(eps):
            return False
    return True


class AffineMap:
    """x -> scale * x + offset with coefficients in Q(beta)."""

    __slots__ = ("scale", "offset")

    def __init__(self, scale, offset):
        self.scale = RationalCombination.coerce(scale) if not isinstance(scale, RationalCombination) else scale
        self.offset = RationalCombination.coerce(offset) if not isinstance(offset, RationalCombination) else offset

    def __call__(self, x):
        return self.scale * x + self.offset

    def compose(self, other):
        """self o other."""
        return AffineMap(self.scale * other.scale, self.scale * other.offset + self.offset)

    def __eq__(self, other):
        return self.scale == other.scale and self.offset == other.offset

    def __repr__(self):
        return "AffineMap(%s*x + %s)" % (self.scale, self.offset)


def digit_map(field, i):
    """R_i(x) = (x + i)/beta."""
    inv = RationalCombination(field.one, field.beta)
    return AffineMap(inv, inv * i)


def word_map(field, word):
    out = AffineMap(RationalCombination(field.one), RationalCombination(field.zero))
    for c in word:
        out = out.compose(digit_map(field, int(c)))
    return out


@dataclass
class BasicInterval:
    word: tuple
    left: RationalCombination
    length: RationalCombination

    @property
    def right(self):
        return self.left + self.length

    def contains(self, other) -> bool:
        return self.left <= other.left and other.right <= self.right


@dataclass
class AdaptedSystem:
    field: NumberField
    words: list            # words over the digit alphabet, as strings
    maps: list             # AffineMap per index
    base: tuple            # (a, b) of the base interval, exact
    name: str = ""

    def __len__(self):
        return len(self.maps)

    def interval_of_word(self, word) -> BasicInterval:
        m = AffineMap(RationalCombination(self.field.one), RationalCombination(self.field.zero))
        for j in word:
            m = m.compose(self.maps[j])
        a, b = self.base
        left = m(a)
        return BasicInterval(tuple(word), left, m.scale * (b - a))

    def images(self):
        return [self.interval_of_word((j,)) for j in range(len(self))]

    def check_partition(self) -> bool:
        ivs = sorted(self.images(), key=lambda iv: float(iv.left))
        # exact confirmation of the float ordering
        for a, b in zip(ivs, ivs[1:]):
            if not a.left < b.left:
                return False
        a, b = self.base
        if ivs[0].left != RationalCombination.coerce(a):
            return False
        for u, v in zip(ivs, ivs[1:]):
            if u.right != v.left:
                return False
        return ivs[-1].right == RationalCombination.coerce(b)

    def check_suffixes(self) -> bool:
        zero = RationalCombination(self.field.zero)
        one = RationalCombination(self.field.one)
        for w in self.words:
            if w is None:
                continue
            for k in range(len(w)):
                m = word_map(self.field, w[k:])
                if m(zero) < zero or m(one) > one:
                    return False
        return True

    def lengths_sum(self):
        total = RationalCombination(self.field.zero)
        for iv in self.images():
            total = total + iv.length
        return total


def _from_words(field, words, name):
    maps = [word_map(field, w) for w in words]
    base = (RationalCombination(field.zero), RationalCombination(field.one))
    return AdaptedSystem(field, list(words), maps, base, name)


def finite_type_adapted_system(field, expansion: BetaExpansionOfOne) -> AdaptedSystem:
    if not expansion.finite_type:
        raise AdmissibilityError("beta-shift is not of finite type")
    eps = expansion.digits
    if len(eps) >= 2 and not admissible(eps):
        raise AdmissibilityError("lexicographic conditions fail")
    words = []
    for k in range(1, len(eps) + 1):
        prefix = "".join(str(e) for e in eps[:k - 1])
        for e in range(eps[k - 1]):
            words.append(prefix + str(e))
    return _from_words(field, words, "finite-type")


def base_net(field) -> AdaptedSystem:
    """Standard base-beta digit net for integer beta."""
    if field.degree != 1:
        raise ValueError("base net needs an integer beta")
    b = -field.poly[1]
    return _from_words(field, [str(i) for i in range(b)], "base-%d" % b)


def adapted_system(field) -> AdaptedSystem:
    if field.degree == 1:
        return base_net(field)
    return finite_type_adapted_system(field, beta_expansion_of_one(field))


def multinacci_field(m):
    return parse_field("x^%d" % m + "".join("-x^%d" % k for k in range(m - 1, 1, -1))
                       + ("-x" if m >= 2 else "") + "-1@1.9")


def multinacci_word(m, j):
    if j == 0:
        return "0" * m
    x = (m - 1) - (j - 1) // (m - 1)
    y = (j - 1) % (m - 1)
    return "0" * x + "1" * y + "10"


def multinacci_xy(m, j):
    return (m - 1) - (j - 1) // (m - 1), (j - 1) % (m - 1)


def multinacci_adapted_system(m, field=None) -> AdaptedSystem:
    if m < 2:
        raise ValueError("m must be >= 2")
    field = field or multinacci_field(m)
    words = [multinacci_word(m, j) for j in range(m * (m - 1) + 1)]
    return _from_words(field, words, "multinacci-%d" % m)


def scaled_erdos_net(field=None) -> AdaptedSystem:
    """S0 = x/b^2, S1 = x/b^3 + 1/b, S2 = x/b^2 + 1 on [0, beta)."""
    field = field or parse_field("x^2-x-1@1.6")
    if field.poly != (1, -1, -1):
        raise ValueError("scaled Erdos net needs the golden field")
    one = RationalCombination(field.one)
    ib = one / field.beta
    maps = [AffineMap(ib * ib, RationalCombination(field.zero)),
            AffineMap(ib * ib * ib, ib),
            AffineMap(ib * ib, one)]
    base = (RationalCombination(field.zero), RationalCombination(field.beta))
    return AdaptedSystem(field, [None, None, None], maps, base, "erdos-scaled")


def net_words(system, depth):
    """All words over the index alphabet of the given length, lexicographic."""
    from itertools import product
    return [tuple(w) for w in product(range(len(system)), repeat=depth)]
