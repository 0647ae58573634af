"""Prime fields, polynomial rings over them, and sparse polynomials.

A polynomial is a mapping from exponent tuples to nonzero coefficients in
``[0, p)``.  Monomial orders are given by nonnegative integer weight matrices,
so that comparing monomials is comparing the tuples ``W @ exponent``.
"""

from __future__ import annotations

import re
from functools import cached_property
from operator import add

from .errors import AlgebraError, ParseError


def _is_prime_int(n):
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


class PrimeField:
    """The field F_p."""

    __slots__ = ("p",)

    def __init__(self, p):
        if not isinstance(p, int) or not _is_prime_int(p):
            raise AlgebraError(f"p must be prime, got {p!r}")
        self.p = p

    def __call__(self, value):
        return value % self.p

    def inv(self, value):
        value %= self.p
        if value == 0:
            raise ZeroDivisionError("inverse of 0 in F_%d" % self.p)
        return pow(value, -1, self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("F", self.p))

    def __repr__(self):
        return f"PrimeField({self.p})"


def order_weights(order, n):
    """Weight matrix for an order tag.

    ``"grevlex"``, ``"lex"`` or ``("elim", k)``: the first ``k`` variables are
    eliminated (block grevlex on them, then grevlex on the rest).
    """
    if order == "lex":
        return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    if order == "grevlex":
        return _grevlex_rows(n, 0, n)
    if isinstance(order, tuple) and len(order) == 2 and order[0] == "elim":
        k = order[1]
        if not 0 <= k <= n:
            raise AlgebraError(f"bad elimination block size {k}")
        return _grevlex_rows(n, 0, k) + _grevlex_rows(n, k, n)
    raise AlgebraError(f"unknown monomial order {order!r}")


def _grevlex_rows(n, lo, hi):
    # grevlex on variables lo..hi-1: total degree, then partial sums dropping
    # the last variables one at a time
    rows = []
    for stop in range(hi, lo, -1):
        rows.append(tuple(1 if lo <= j < stop else 0 for j in range(n)))
    return tuple(rows)


class Ring:
    """F_p[vars] with a fixed global monomial order."""

    def __init__(self, p, variables, order="grevlex"):
        self.field = p if isinstance(p, PrimeField) else PrimeField(p)
        self.p = self.field.p
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise AlgebraError("variable names must be distinct")
        for v in variables:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", v):
                raise AlgebraError(f"bad variable name {v!r}")
        self.vars = variables
        self.nvars = len(variables)
        self.order = order
        self.weights = order_weights(order, self.nvars)
        self._key = (self.p, self.vars, self.weights)

    def __eq__(self, other):
        return self is other or (isinstance(other, Ring) and other._key == self._key)

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"Ring({self.p}, {list(self.vars)!r}, order={self.order!r})"

    def sort_key(self, exp):
        return tuple(sum(w * e for w, e in zip(row, exp)) for row in self.weights)

    @cached_property
    def zero(self):
        return Polynomial(self, {})

    @cached_property
    def one(self):
        return self.const(1)

    def const(self, c):
        return Polynomial(self, {(0,) * self.nvars: c})

    def monomial(self, exp, coeff=1):
        return Polynomial(self, {tuple(exp): coeff})

    def gens(self):
        return [self.var(v) for v in self.vars]

    def var(self, name):
        try:
            i = self.vars.index(name)
        except ValueError:
            raise AlgebraError(f"unknown variable {name!r}") from None
        exp = [0] * self.nvars
        exp[i] = 1
        return Polynomial(self, {tuple(exp): 1})

    def parse(self, text, names=None):
        return parse_polynomial(self, text, names)

    def with_order(self, order):
        return Ring(self.field, self.vars, order)


class Polynomial:
    """Immutable sparse polynomial over a prime field."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring, terms, _clean=False):
        self.ring = ring
        if _clean:
            self.terms = terms
        else:
            p = ring.p
            n = ring.nvars
            clean = {}
            for exp, c in terms.items():
                c %= p
                if c:
                    exp = tuple(exp)
                    if len(exp) != n:
                        raise AlgebraError("exponent length does not match the ring")
                    clean[exp] = c
            self.terms = clean
        self._hash = None

    def _check(self, other):
        if isinstance(other, int):
            return self.ring.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        if other.ring is not self.ring and other.ring != self.ring:
            raise AlgebraError("ring mismatch")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        p = self.ring.p
        out = dict(self.terms)
        for exp, c in other.terms.items():
            s = (out.get(exp, 0) + c) % p
            if s:
                out[exp] = s
            else:
                out.pop(exp, None)
        return Polynomial(self.ring, out, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.p
        return Polynomial(self.ring, {e: p - c for e, c in self.terms.items()}, _clean=True)

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        other = self._check(other)
        if other is NotImplemented:
            return other
        if not self.terms or not other.terms:
            return self.ring.zero
        p = self.ring.p
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        out = {}
        get = out.get
        for eb, cb in b.items():
            for ea, ca in a.items():
                e = tuple(map(add, ea, eb))
                out[e] = get(e, 0) + ca * cb
        return Polynomial(self.ring, {e: c % p for e, c in out.items() if c % p}, _clean=True)

    __rmul__ = __mul__

    def scale(self, c):
        c %= self.ring.p
        if c == 0:
            return self.ring.zero
        if c == 1:
            return self
        p = self.ring.p
        return Polynomial(self.ring, {e: (v * c) % p for e, v in self.terms.items()}, _clean=True)

    def mul_monomial(self, exp, coeff=1):
        p = self.ring.p
        coeff %= p
        if not coeff:
            return self.ring.zero
        return Polynomial(
            self.ring,
            {tuple(map(add, e, exp)): (c * coeff) % p for e, c in self.terms.items()},
            _clean=True,
        )

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise AlgebraError("exponent must be a nonnegative integer")
        if k == 0:
            return self.ring.one
        p = self.ring.p
        if k % p == 0:
            return (self ** (k // p)).frobenius(1)
        result = self.ring.one
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def frobenius(self, e=1):
        """Return ``self ** (p**e)``; coefficients are fixed since they lie in F_p."""
        if e < 0:
            raise AlgebraError("e must be nonnegative")
        q = self.ring.p ** e
        return Polynomial(
            self.ring, {tuple(q * x for x in exp): c for exp, c in self.terms.items()}, _clean=True
        )

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self):
        if not self.is_constant():
            raise AlgebraError("not a constant")
        return next(iter(self.terms.values()), 0)

    def degree(self):
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, i):
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def support_vars(self):
        used = set()
        for e in self.terms:
            used.update(i for i, x in enumerate(e) if x)
        return used

    def sorted_terms(self):
        key = self.ring.sort_key
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def lead(self):
        """``(exponent, coefficient)`` of the leading term under the ring order."""
        if not self.terms:
            raise AlgebraError("zero polynomial has no leading term")
        key = self.ring.sort_key
        exp = max(self.terms, key=key)
        return exp, self.terms[exp]

    def monic(self):
        if not self.terms:
            return self
        return self.scale(self.ring.field.inv(self.lead()[1]))

    def diff(self, i):
        p = self.ring.p
        out = {}
        for e, c in self.terms.items():
            if e[i] % p:
                ne = list(e)
                ne[i] -= 1
                out[tuple(ne)] = (c * e[i]) % p
        return Polynomial(self.ring, out, _clean=True)

    def divmod(self, d):
        """Division by a single polynomial: ``self = q*d + r`` with no term of r
        divisible by the leading monomial of d."""
        d = self._check(d)
        if d.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        lexp, lc = d.lead()
        inv = self.ring.field.inv(lc)
        key = self.ring.sort_key
        p = self.ring.p
        rem = dict(self.terms)
        quo = {}
        out = {}
        dterms = list(d.terms.items())
        while rem:
            exp = max(rem, key=key)
            c = rem[exp]
            if all(x >= y for x, y in zip(exp, lexp)):
                m = tuple(x - y for x, y in zip(exp, lexp))
                f = (c * inv) % p
                quo[m] = (quo.get(m, 0) + f) % p
                for de, dc in dterms:
                    te = tuple(x + y for x, y in zip(de, m))
                    v = (rem.get(te, 0) - f * dc) % p
                    if v:
                        rem[te] = v
                    else:
                        rem.pop(te, None)
            else:
                out[exp] = c
                del rem[exp]
        quo = {e: c for e, c in quo.items() if c}
        return Polynomial(self.ring, quo, _clean=True), Polynomial(self.ring, out, _clean=True)

    def exact_div(self, d):
        q, r = self.divmod(d)
        if r:
            raise AlgebraError("division is not exact")
        return q

    def divisible_by(self, d):
        return not self.divmod(d)[1]

    def subs(self, mapping):
        """Substitute variables (by index) with polynomials of a target ring.

        ``mapping`` is a sequence of length ``nvars`` of Polynomials (all in one
        ring); the result lives in that ring.
        """
        target = mapping[0].ring if mapping else self.ring
        result = target.zero
        cache = {}
        for exp, c in self.terms.items():
            term = target.const(c)
            for i, k in enumerate(exp):
                if k:
                    key = (i, k)
                    if key not in cache:
                        cache[key] = mapping[i] ** k
                    term = term * cache[key]
            result = result + term
        return result

    def change_ring(self, ring, var_map=None):
        """Re-home this polynomial in ``ring`` matching variables by name.

        Variables missing from ``ring`` must not occur in the polynomial.
        """
        if var_map is None:
            var_map = [ring.vars.index(v) if v in ring.vars else None for v in self.ring.vars]
        n = ring.nvars
        out = {}
        for exp, c in self.terms.items():
            ne = [0] * n
            for i, k in enumerate(exp):
                if k:
                    if var_map[i] is None:
                        raise AlgebraError(f"target ring lacks {self.ring.vars[i]!r}")
                    ne[var_map[i]] += k
            out[tuple(ne)] = c
        if ring.p != self.ring.p:
            raise AlgebraError("characteristic mismatch")
        return Polynomial(ring, out, _clean=True)

    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial({format_polynomial(self)!r})"


def format_monomial(ring, exp):
    parts = []
    for v, k in zip(ring.vars, exp):
        if k == 1:
            parts.append(v)
        elif k:
            parts.append(f"{v}^{k}")
    return "*".join(parts)


def format_polynomial(f):
    if not f.terms:
        return "0"
    out = []
    for exp, c in f.sorted_terms():
        mono = format_monomial(f.ring, exp)
        if not mono:
            out.append(str(c))
        elif c == 1:
            out.append(mono)
        else:
            out.append(f"{c}*{mono}")
    return "+".join(out)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


class _PolyParser:
    def __init__(self, ring, text, names, line=None, col_offset=0):
        self.ring = ring
        self.text = text
        self.names = names or {}
        self.line = line
        self.col_offset = col_offset
        self.tokens = []
        for m in _TOKEN.finditer(text):
            if m.group(1) is not None:
                self.tokens.append(("num", int(m.group(1)), m.start(1)))
            elif m.group(2) is not None:
                self.tokens.append(("name", m.group(2), m.start(2)))
            elif m.group(3) is not None:
                self.tokens.append(("op", m.group(3), m.start(3)))
        self.pos = 0

    def error(self, msg, at=None):
        if at is None:
            at = self.tokens[self.pos][2] if self.pos < len(self.tokens) else len(self.text)
        raise ParseError(msg, self.line, self.col_offset + at + 1)

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def parse(self):
        if not self.tokens:
            self.error("empty polynomial")
        f = self.expr()
        if self.peek() is not None:
            self.error(f"unexpected {self.peek()[1]!r}")
        return f

    def expr(self):
        sign = 1
        tok = self.peek()
        if tok and tok[0] == "op" and tok[1] in "+-":
            self.take()
            sign = -1 if tok[1] == "-" else 1
        f = self.term().scale(sign)
        while True:
            tok = self.peek()
            if tok and tok[0] == "op" and tok[1] in "+-":
                self.take()
                t = self.term()
                f = f + t if tok[1] == "+" else f - t
            else:
                return f

    def term(self):
        f = self.power()
        while True:
            tok = self.peek()
            if tok and tok[0] == "op" and tok[1] == "*":
                self.take()
                f = f * self.power()
            else:
                return f

    def power(self):
        base = self.atom()
        tok = self.peek()
        if tok and tok[0] == "op" and tok[1] == "^":
            self.take()
            exp = self.take()
            if exp is None or exp[0] != "num":
                self.error("exponent must be a nonnegative integer", exp[2] if exp else None)
            return base ** exp[1]
        return base

    def atom(self):
        tok = self.take()
        if tok is None:
            self.error("unexpected end of polynomial")
        kind, val, at = tok
        if kind == "num":
            return self.ring.const(val)
        if kind == "name":
            if val in self.ring.vars:
                return self.ring.var(val)
            if val in self.names:
                return self.names[val]
            self.error(f"unknown variable {val!r}", at)
        if val == "(":
            f = self.expr()
            close = self.take()
            if close is None or close[1] != ")":
                self.error("expected ')'", close[2] if close else None)
            return f
        self.error(f"unexpected {val!r}", at)


def parse_polynomial(ring, text, names=None, line=None, col_offset=0):
    """Parse ``x^3+y*z-2`` style text (parentheses allowed) into ``ring``."""
    return _PolyParser(ring, text, names, line, col_offset).parse()
