"""Matrices with polynomial entries."""

from __future__ import annotations

from itertools import permutations

from .errors import AlgebraError
from .ring import Polynomial


class PolyMatrix:
    """Immutable ``rows x cols`` matrix over a polynomial ring."""

    __slots__ = ("ring", "rows", "cols", "entries", "_hash")

    def __init__(self, ring, entries):
        entries = tuple(tuple(row) for row in entries)
        if not entries or not entries[0]:
            raise AlgebraError("matrix must have positive dimensions")
        cols = len(entries[0])
        for row in entries:
            if len(row) != cols:
                raise AlgebraError("ragged matrix")
        self.ring = ring
        self.rows = len(entries)
        self.cols = cols
        self.entries = tuple(
            tuple(_coerce(ring, x) for x in row) for row in entries
        )
        self._hash = None

    @classmethod
    def identity(cls, ring, n):
        return cls(ring, [[ring.one if i == j else ring.zero for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, ring, rows, cols):
        return cls(ring, [[ring.zero] * cols for _ in range(rows)])

    @classmethod
    def from_columns(cls, ring, columns):
        columns = [tuple(c) for c in columns]
        return cls(ring, list(zip(*columns)))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i):
        return self.entries[i]

    def column(self, j):
        return tuple(row[j] for row in self.entries)

    def columns(self):
        return [self.column(j) for j in range(self.cols)]

    @property
    def is_square(self):
        return self.rows == self.cols

    def __eq__(self, other):
        return isinstance(other, PolyMatrix) and self.ring == other.ring and self.entries == other.entries

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.entries)
        return self._hash

    def __add__(self, other):
        self._same_shape(other)
        return PolyMatrix(
            self.ring,
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)],
        )

    def __sub__(self, other):
        self._same_shape(other)
        return PolyMatrix(
            self.ring,
            [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)],
        )

    def _same_shape(self, other):
        if self.ring != other.ring:
            raise AlgebraError("ring mismatch")
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise AlgebraError("shape mismatch")

    def __mul__(self, other):
        if isinstance(other, (int, Polynomial)):
            return PolyMatrix(self.ring, [[other * a for a in row] for row in self.entries])
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        if self.ring != other.ring:
            raise AlgebraError("ring mismatch")
        if self.cols != other.rows:
            raise AlgebraError("shape mismatch")
        zero = self.ring.zero
        out = []
        for row in self.entries:
            new = []
            for j in range(other.cols):
                acc = zero
                for k, a in enumerate(row):
                    b = other.entries[k][j]
                    if a and b:
                        acc = acc + a * b
                new.append(acc)
            out.append(new)
        return PolyMatrix(self.ring, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Polynomial)):
            return self * other
        return NotImplemented

    def apply(self, vec):
        """Matrix times a column vector (tuple of polynomials)."""
        if len(vec) != self.cols:
            raise AlgebraError("vector length does not match matrix")
        zero = self.ring.zero
        out = []
        for row in self.entries:
            acc = zero
            for a, b in zip(row, vec):
                if a and b:
                    acc = acc + a * b
            out.append(acc)
        return tuple(out)

    def bracket_power(self, e):
        """Entrywise ``p**e``-th powers."""
        if e < 0:
            raise AlgebraError("e must be nonnegative")
        if e == 0:
            return self
        return PolyMatrix(self.ring, [[a.frobenius(e) for a in row] for row in self.entries])

    def submatrix(self, rows, cols):
        return PolyMatrix(self.ring, [[self.entries[i][j] for j in cols] for i in rows])

    def map(self, fn):
        return PolyMatrix(self.ring, [[fn(a) for a in row] for row in self.entries])

    def is_zero(self):
        return all(not a for row in self.entries for a in row)

    def determinant(self):
        if not self.is_square:
            raise AlgebraError("determinant of a non-square matrix")
        n = self.rows
        if n <= 4:
            return _det_expand(self.ring, self.entries)
        return _det_bareiss(self.ring, self.entries)

    def __str__(self):
        return "[" + ",".join("[" + ",".join(str(a) for a in row) + "]" for row in self.entries) + "]"

    def __repr__(self):
        return f"PolyMatrix({self})"


def _coerce(ring, x):
    if isinstance(x, Polynomial):
        if x.ring != ring:
            raise AlgebraError("ring mismatch")
        return x
    if isinstance(x, int):
        return ring.const(x)
    raise AlgebraError(f"cannot use {x!r} as a matrix entry")


def _perm_sign(perm):
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if not seen[i]:
            j = i
            length = 0
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                length += 1
            if length % 2 == 0:
                sign = -sign
    return sign


def _det_expand(ring, a):
    n = len(a)
    total = ring.zero
    for perm in permutations(range(n)):
        term = ring.one
        for i, j in enumerate(perm):
            entry = a[i][j]
            if not entry:
                term = None
                break
            term = term * entry
        if term is not None:
            total = total + term.scale(_perm_sign(perm))
    return total


def _det_bareiss(ring, a):
    m = [list(row) for row in a]
    n = len(m)
    sign = 1
    prev = ring.one
    for k in range(n - 1):
        if not m[k][k]:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return ring.zero
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]).exact_div(prev)
        prev = m[k][k]
    return m[n - 1][n - 1].scale(sign)
