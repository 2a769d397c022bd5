"""The translation set I_(beta,d) and its relation automaton."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from math import floor

from .algebraic import AlgebraicNumber, NumberField, RationalCombination


class CapExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class DigitParams:
    b: int
    d: int
    alpha_mu: RationalCombination

    @classmethod
    def make(cls, field: NumberField, d: int, b: int | None = None) -> "DigitParams":
        beta = field.beta
        if b is None:
            lo, _ = field.beta_enclosure
            b = floor(lo)
            while (beta - b).sign() > 0:
                b += 1
        if not ((beta - (b - 1)).sign() > 0 and (beta - b).sign() <= 0):
            raise ValueError("need b-1 < beta <= b (b=%d)" % b)
        if b < 2 or d < b:
            raise ValueError("need 2 <= b <= d (b=%d, d=%d)" % (b, d))
        alpha = RationalCombination(field.from_integer(d - 1), beta - 1)
        return cls(b, d, alpha)


@dataclass(frozen=True)
class RelationEdge:
    h: int
    i: int
    k: int
    j: int


@dataclass
class ISet:
    field: NumberField
    params: DigitParams
    elements: list
    iterations: int = 0

    def __post_init__(self):
        self.index = {e.coeffs: n for n, e in enumerate(self.elements)}

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def position(self, x: AlgebraicNumber) -> int:
        return self.index[x.coeffs]

    def __contains__(self, x):
        return x.coeffs in self.index


def in_window(y: AlgebraicNumber, params: DigitParams) -> bool:
    """-1 < y < (d-1)/(beta-1), decided exactly (beta - 1 > 0)."""
    if (y + 1).sign() <= 0:
        return False
    beta = y.field.beta
    return ((params.d - 1) - y * (beta - 1)).sign() > 0


def build_iset(field: NumberField, params: DigitParams, max_iters: int = 64, max_size: int = 4096):
    """Breadth-first closure of {0} under x -> beta*x + i - j.

    Returns ``(iset, edges)``; edges are listed per source in (i, j) order.
    """
    beta = field.beta
    elements = [field.zero]
    index = {field.zero.coeffs: 0}
    depth = [0]
    edges = []
    queue = deque([0])
    while queue:
        h = queue.popleft()
        if depth[h] >= max_iters:
            raise CapExceeded("iteration cap %d exceeded" % max_iters)
        bx = beta * elements[h]
        for i in range(params.b):
            for j in range(params.d):
                y = bx + (i - j)
                if not in_window(y, params):
                    continue
                k = index.get(y.coeffs)
                if k is None:
                    if len(elements) >= max_size:
                        raise CapExceeded("size cap %d exceeded" % max_size)
                    k = len(elements)
                    index[y.coeffs] = k
                    elements.append(y)
                    depth.append(depth[h] + 1)
                    queue.append(k)
                edges.append(RelationEdge(h, i, k, j))
    iset = ISet(field, params, elements, iterations=max(depth) + 1)
    return iset, edges


def all_relations(iset: ISet):
    """Independent enumeration of every (h, i, k, j) with j = i + beta*i_h - i_k in D."""
    beta = iset.field.beta
    out = []
    for h, xh in enumerate(iset.elements):
        for i in range(iset.params.b):
            for k, xk in enumerate(iset.elements):
                diff = beta * xh + i - xk
                c = diff.coeffs
                if all(v == 0 for v in c[1:]) and 0 <= c[0] < iset.params.d:
                    out.append(RelationEdge(h, i, k, c[0]))
    return out


def min_gap(iset: ISet):
    """Smallest |i_h - i_k| as an exact AlgebraicNumber, h != k."""
    best = None
    for a in range(len(iset)):
        for c in range(a + 1, len(iset)):
            diff = iset.elements[a] - iset.elements[c]
            if diff.sign() < 0:
                diff = -diff
            if best is None or (diff - best).sign() < 0:
                best = diff
    return best


def export_automaton(iset: ISet, edges) -> str:
    lines = ["digraph iset {", "  rankdir=LR;"]
    for n, e in enumerate(iset.elements):
        lines.append('  n%d [label="%s"];' % (n, e))
    for e in edges:
        lines.append('  n%d -> n%d [label="%d/%d"];' % (e.h, e.k, e.i, e.j))
    lines.append("}")
    return "\n".join(lines) + "\n"
