"""Digit-indexed transition matrices and word products."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np


class FixedVectorError(RuntimeError):
    pass


def parse_probs(text, exact=None):
    """Parse "1/6,1/6,..." or decimals.  Returns (values, exact_flag)."""
    parts = [s.strip() for s in text.split(",") if s.strip()]
    fracs = [Fraction(s) for s in parts]
    if exact is None:
        exact = not any(("." in s or "e" in s.lower()) for s in parts)
    if exact:
        return fracs, True
    return [float(f) for f in fracs], False


def check_probs(probs, exact):
    if any(p < 0 for p in probs):
        raise ValueError("probabilities must be nonnegative")
    total = sum(probs)
    if exact:
        if total != 1:
            raise ValueError("probabilities must sum to 1 (got %s)" % total)
    elif abs(total - 1) > 1e-15 * max(1, len(probs)):
        raise ValueError("probabilities must sum to 1 (got %r)" % total)


def _zeros(r, exact):
    if exact:
        m = np.empty((r, r), dtype=object)
        m.fill(Fraction(0))
        return m
    return np.zeros((r, r))


def identity(r, exact):
    m = _zeros(r, exact)
    for k in range(r):
        m[k, k] = Fraction(1) if exact else 1.0
    return m


@dataclass
class MatrixFamily:
    matrices: list
    exact: bool
    labels: list = field(default_factory=list)

    @property
    def size(self):
        return self.matrices[0].shape[0]

    def __len__(self):
        return len(self.matrices)

    def __getitem__(self, i):
        return self.matrices[i]


def digit_matrices(size, b, edges):
    """Integer matrices holding the digit j at (h, k) for digit i, else -1."""
    out = [np.full((size, size), -1, dtype=int) for _ in range(b)]
    for e in edges:
        out[e.i][e.h, e.k] = e.j
    return out


def build_matrices(iset, edges, probs, exact=None):
    if len(probs) != iset.params.d:
        raise ValueError("expected %d probabilities, got %d" % (iset.params.d, len(probs)))
    if exact is None:
        exact = all(isinstance(p, (int, Fraction)) for p in probs)
    probs = [Fraction(p) for p in probs] if exact else [float(p) for p in probs]
    r = len(iset)
    mats = [_zeros(r, exact) for _ in range(iset.params.b)]
    for e in edges:
        mats[e.i][e.h, e.k] = probs[e.j]
    return MatrixFamily(mats, exact, labels=[str(i) for i in range(iset.params.b)])


def word_product(family, word):
    """M_{w0} M_{w1} ... ; the empty word gives the identity."""
    out = identity(family.size, family.exact)
    for c in word:
        out = out.dot(family.matrices[c])
    return out


def sum_family(family, words):
    total = _zeros(family.size, family.exact)
    for w in words:
        total = total + word_product(family, w)
    return total


def _nullspace_fraction(A):
    """Basis of the right nullspace of a Fraction matrix."""
    A = [list(row) for row in A]
    rows, cols = len(A), len(A[0])
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((k for k in range(r, rows) if A[k][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        pv = A[r][c]
        A[r] = [v / pv for v in A[r]]
        for k in range(rows):
            if k != r and A[k][c] != 0:
                f = A[k][c]
                A[k] = [a - f * b for a, b in zip(A[k], A[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fcol in free:
        v = [Fraction(0)] * cols
        v[fcol] = Fraction(1)
        for row, pc in enumerate(pivots):
            v[pc] = -A[row][fcol]
        basis.append(v)
    return basis


def fixed_vector(M, L=None, tol=1e-14, max_iter=200000):
    """Nonnegative R with M R = R, normalized so that L.R = 1."""
    r = M.shape[0]
    if L is None:
        L = [1] * r
    if M.dtype == object:
        A = [[M[h, k] - (1 if h == k else 0) for k in range(r)] for h in range(r)]
        basis = _nullspace_fraction(A)
        cands = []
        for v in basis:
            if all(x >= 0 for x in v) or all(x <= 0 for x in v):
                cands.append(v)
        if len(basis) != 1 or not cands:
            raise FixedVectorError("fixed space is not a single nonnegative ray (dim %d)" % len(basis))
        v = cands[0]
        norm = sum(Fraction(a) * b for a, b in zip(L, v))
        if norm == 0:
            raise FixedVectorError("L.R = 0")
        out = np.empty(r, dtype=object)
        for k in range(r):
            out[k] = v[k] / norm
        return out
    Mf = np.asarray(M, dtype=float)
    A = 0.5 * (np.eye(r) + Mf)
    v = np.full(r, 1.0 / r)
    Lf = np.asarray([float(x) for x in L])
    for _ in range(max_iter):
        w = A @ v
        s = w.sum()
        if s <= 0:
            break
        w /= s
        if np.max(np.abs(w - v)) <= tol:
            v = w
            break
        v = w
    norm = Lf @ v
    if norm <= 0 or np.max(np.abs(Mf @ v - v)) / max(v.max(), 1e-300) > 1e-10:
        raise FixedVectorError("power iteration found no fixed vector")
    v = v / norm
    return v


def to_strings(M):
    return [[str(x) if not isinstance(x, float) else "%.12g" % x for x in row] for row in M]
