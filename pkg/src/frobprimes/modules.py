"""Submodules of R^alpha and the ideal/module operations built on Gröbner bases.

Ideals are rank-one submodules.  Every :class:`Submodule` caches its reduced
Gröbner basis (position over term, position 0 dominant), which is unique, so
module equality is equality of bases.
"""

from __future__ import annotations

from .errors import AlgebraError, ParseError
from .gb import engine
from .ring import Polynomial, parse_polynomial


class Submodule:
    """A finitely generated submodule of ``ring**rank``."""

    __slots__ = ("ring", "rank", "gens", "_gb", "_reducer")

    def __init__(self, ring, rank, gens=()):
        if rank < 1:
            raise AlgebraError("rank must be positive")
        cleaned = []
        for v in gens:
            if isinstance(v, Polynomial):
                v = (v,)
            v = tuple(v)
            if len(v) != rank:
                raise AlgebraError(f"generator of length {len(v)} in a rank {rank} module")
            for f in v:
                if f.ring != ring:
                    raise AlgebraError("ring mismatch")
            if any(v):
                cleaned.append(v)
        self.ring = ring
        self.rank = rank
        self.gens = tuple(cleaned)
        self._gb = None
        self._reducer = None

    # -- constructors ----------------------------------------------------

    @classmethod
    def ideal(cls, ring, gens):
        return cls(ring, 1, [(f,) for f in gens])

    @classmethod
    def free(cls, ring, rank):
        return cls(ring, rank, [unit_vector(ring, rank, i) for i in range(rank)])

    @classmethod
    def zero(cls, ring, rank):
        return cls(ring, rank, [])

    @classmethod
    def from_columns(cls, matrix):
        """The image of a PolyMatrix (its column span)."""
        return cls(matrix.ring, matrix.rows, matrix.columns())

    def times_free(self, rank):
        """``I * R^rank`` for an ideal ``I``."""
        self._need_ideal()
        out = []
        for (f,) in self.gb:
            for i in range(rank):
                out.append(tuple(f if j == i else self.ring.zero for j in range(rank)))
        return Submodule(self.ring, rank, out)

    # -- Gröbner data ----------------------------------------------------

    @property
    def engine(self):
        return engine(self.ring, self.rank)

    @property
    def gb(self):
        """Reduced monic Gröbner basis as a tuple of vectors, lead-descending."""
        if self._gb is None:
            eng = self.engine
            basis = eng.groebner([eng.encode(v) for v in self.gens])
            self._reducer = eng.make_reducer(basis)
            self._gb = tuple(eng.decode(f) for f in basis)
        return self._gb

    @property
    def reducer(self):
        if self._reducer is None:
            self.gb
        return self._reducer

    @property
    def generators(self):
        """Polynomials of an ideal's reduced Gröbner basis."""
        self._need_ideal()
        return [v[0] for v in self.gb]

    def _need_ideal(self):
        if self.rank != 1:
            raise AlgebraError("operation needs an ideal (rank 1)")

    def _check(self, other):
        if not isinstance(other, Submodule):
            raise AlgebraError("expected a Submodule")
        if other.ring != self.ring:
            raise AlgebraError("ring mismatch")
        if other.rank != self.rank:
            raise AlgebraError(f"rank mismatch: {self.rank} vs {other.rank}")

    def _vec(self, v):
        if isinstance(v, Polynomial):
            v = (v,)
        v = tuple(v)
        if len(v) != self.rank:
            raise AlgebraError(f"vector of length {len(v)} for a rank {self.rank} module")
        return v

    # -- membership ------------------------------------------------------

    def normal_form(self, v):
        v = self._vec(v)
        eng = self.engine
        r = eng.normal_form(eng.encode(v), self.reducer)
        return eng.decode(r)

    def reduce(self, f):
        """Normal form of a polynomial modulo an ideal."""
        self._need_ideal()
        return self.normal_form((f,))[0]

    def contains(self, v):
        v = self._vec(v)
        eng = self.engine
        return not eng.normal_form(eng.encode(v), self.reducer)

    def __contains__(self, v):
        return self.contains(v)

    def contains_module(self, other):
        self._check(other)
        return all(self.contains(v) for v in other.gens)

    def __le__(self, other):
        return other.contains_module(self)

    def __eq__(self, other):
        if not isinstance(other, Submodule):
            return NotImplemented
        return self.ring == other.ring and self.rank == other.rank and self.gb == other.gb

    def __hash__(self):
        return hash((self.rank, self.gb))

    def is_zero(self):
        return not self.gens

    def is_free(self):
        """Whether this is all of R^rank."""
        gb = self.gb
        return len(gb) == self.rank and all(
            sum(1 for f in v if f) == 1 and next(f for f in v if f).is_constant() for v in gb
        )

    def is_unit(self):
        self._need_ideal()
        return self.is_free()

    def lift_membership(self, v):
        """Coefficients ``c`` with ``v = sum c_i * gens_i``, or ``None``.

        Uses a Gröbner basis of the generators tagged with unit vectors in an
        extra block of coordinates; the result is re-expanded and checked.
        """
        v = self._vec(v)
        s = len(self.gens)
        if not any(v):
            return tuple(self.ring.zero for _ in range(s))
        if s == 0:
            return None
        a = self.rank
        zero = self.ring.zero
        tagged = []
        for i, g in enumerate(self.gens):
            tagged.append(g + tuple(self.ring.one if j == i else zero for j in range(s)))
        big = Submodule(self.ring, a + s, tagged)
        r = big.normal_form(v + (zero,) * s)
        if any(r[:a]):
            return None
        coeffs = tuple(-c for c in r[a:])
        total = [zero] * a
        for c, g in zip(coeffs, self.gens):
            if c:
                for k in range(a):
                    total[k] = total[k] + c * g[k]
        if tuple(total) != v:
            raise AlgebraError("membership lift failed re-expansion")
        return coeffs

    # -- operations ------------------------------------------------------

    def __add__(self, other):
        self._check(other)
        return Submodule(self.ring, self.rank, self.gens + other.gens)

    def scale(self, f):
        return Submodule(self.ring, self.rank, [tuple(f * x for x in v) for v in self.gens])

    def intersect(self, other):
        """Intersection via a block elimination in rank ``2*alpha``."""
        self._check(other)
        if self.is_zero() or other.is_zero():
            return Submodule.zero(self.ring, self.rank)
        if self.contains_module(other):
            return other
        if other.contains_module(self):
            return self
        a = self.rank
        zero = (self.ring.zero,) * a
        gens = [g + g for g in self.gens] + [h + zero for h in other.gens]
        return _second_block(Submodule(self.ring, 2 * a, gens), a)

    def colon(self, f):
        """``(self :_{R^alpha} f) = {v | f*v in self}``."""
        if not isinstance(f, Polynomial):
            f = self.ring.const(f)
        if not f:
            raise AlgebraError("colon by the zero element")
        if f.is_constant():
            return self
        a = self.rank
        zero = self.ring.zero
        gens = []
        for k in range(a):
            e = unit_vector(self.ring, a, k)
            gens.append(tuple(f * x for x in e) + e)
        gens += [g + (zero,) * a for g in self.gens]
        return _second_block(Submodule(self.ring, 2 * a, gens), a)

    def quotient(self, other):
        """Ideal quotient ``(self : other)`` for ideals."""
        self._need_ideal()
        other._need_ideal()
        result = None
        for (g,) in other.gb:
            q = self.colon(g)
            result = q if result is None else result.intersect(q)
            if result == self:
                return self
        return result if result is not None else Submodule.free(self.ring, 1)

    def saturation(self, f):
        current = self
        while True:
            nxt = current.colon(f)
            if nxt == current:
                return current
            current = nxt

    def annihilator(self):
        """The ideal ``(0 :_R R^alpha / self)``."""
        a = self.rank
        if a == 1:
            return Submodule(self.ring, 1, self.gb)
        result = None
        for i in range(a):
            order = [j for j in range(a) if j != i] + [i]
            perm = Submodule(self.ring, a, [tuple(v[j] for j in order) for v in self.gens])
            part = Submodule.ideal(
                self.ring, [v[-1] for v in perm.gb if not any(v[:-1])]
            )
            result = part if result is None else result.intersect(part)
            if result.is_zero():
                break
        return result

    def bracket_power(self, e):
        if e == 0:
            return self
        return Submodule(self.ring, self.rank, [tuple(f.frobenius(e) for f in v) for v in self.gb])

    def change_ring(self, ring):
        return Submodule(ring, self.rank, [tuple(f.change_ring(ring) for f in v) for v in self.gens])

    # -- text --------------------------------------------------------------

    def __str__(self):
        if self.rank == 1:
            return format_ideal(self)
        return format_module(self)

    def __repr__(self):
        return f"Submodule({self})"


def unit_vector(ring, rank, i):
    return tuple(ring.one if j == i else ring.zero for j in range(rank))


def _second_block(big, a):
    kept = [v[a:] for v in big.gb if not any(v[:a])]
    return Submodule(big.ring, a, kept)


def intersect_all(modules):
    modules = list(modules)
    if not modules:
        raise AlgebraError("empty intersection")
    out = modules[0]
    for m in modules[1:]:
        out = out.intersect(m)
    return out


def module_equal(m1, m2):
    m1._check(m2)
    return m1.gb == m2.gb


# -- serialization ------------------------------------------------------------


def format_ideal(ideal):
    gb = ideal.gb
    if not gb:
        return "(0)"
    if ideal.is_unit():
        return "(1)"
    return "(" + ", ".join(str(v[0]) for v in sorted(gb, key=lambda v: _gen_key(v[0]))) + ")"


def _gen_key(f):
    return (f.degree(), str(f))


def format_module(module):
    gb = module.gb
    if not gb:
        return "[]"
    return "[" + ",".join("[" + ",".join(str(f) for f in v) + "]" for v in gb) + "]"


def _split_top(text, sep=","):
    parts = []
    depth = 0
    start = 0
    for i, ch in enumerate(text):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif ch == sep and depth == 0:
            parts.append((start, text[start:i]))
            start = i + 1
    parts.append((start, text[start:]))
    return parts


def parse_vectors(ring, text, names=None, line=None, col_offset=0):
    """Parse ``[[f,g],[h,k]]`` into a list of vectors (tuples of polynomials)."""
    s = text.strip()
    lead = len(text) - len(text.lstrip())
    if not (s.startswith("[") and s.endswith("]")):
        raise ParseError("expected a bracketed list of vectors", line, col_offset + lead + 1)
    inner = s[1:-1]
    base = col_offset + lead + 1
    if not inner.strip():
        return []
    vectors = []
    for off, chunk in _split_top(inner):
        c = chunk.strip()
        pad = len(chunk) - len(chunk.lstrip())
        if not (c.startswith("[") and c.endswith("]")):
            raise ParseError("expected a vector like [f,g]", line, base + off + pad + 1)
        entries = []
        for eoff, piece in _split_top(c[1:-1]):
            entries.append(
                parse_polynomial(ring, piece, names, line, base + off + pad + 1 + eoff)
            )
        vectors.append(tuple(entries))
    return vectors


def parse_module(ring, text, rank=None, names=None, line=None, col_offset=0):
    vectors = parse_vectors(ring, text, names, line, col_offset)
    if rank is None:
        if not vectors:
            raise ParseError("cannot infer the rank of an empty module", line)
        rank = len(vectors[0])
    for v in vectors:
        if len(v) != rank:
            raise ParseError(f"vector of length {len(v)}, expected {rank}", line)
    return Submodule(ring, rank, vectors)


def parse_ideal(ring, text, names=None, line=None, col_offset=0):
    """Parse ``(f, g, ...)``; ``(0)`` and ``(1)`` work as expected."""
    s = text.strip()
    lead = len(text) - len(text.lstrip())
    if not (s.startswith("(") and s.endswith(")")):
        raise ParseError("expected an ideal like (f, g)", line, col_offset + lead + 1)
    base = col_offset + lead + 1
    gens = [
        parse_polynomial(ring, piece, names, line, base + off)
        for off, piece in _split_top(s[1:-1])
    ]
    return Submodule.ideal(ring, gens)
