"""Buchberger's algorithm for submodules of free modules over F_p[x].

Module terms are packed into single Python integers so that comparing terms,
multiplying a term by a monomial and testing divisibility are all plain
integer operations::

    T = posrank << POS_SHIFT | code << CODE_SHIFT | D

``D`` holds the exponent vector in 24-bit fields (the top bit of each field is
a guard bit used by the divisibility test), ``code`` holds the weighted
degrees of the monomial order in 32-bit fields (first row most significant),
and ``posrank`` encodes the position so that position 0 is the most
significant one (position over term).  Because every order used here is given
by a nonsingular weight matrix, integer comparison of ``T`` is exactly the
module order.
"""

from __future__ import annotations

import heapq
from functools import lru_cache

from .ring import Polynomial

FIELD_BITS = 24
CODE_BITS = 32
_FIELD_MASK = (1 << FIELD_BITS) - 1
_MAX_EXP = 1 << (FIELD_BITS - 1)


class ModuleEngine:
    """Term packing and Gröbner routines for ``ring**rank``."""

    def __init__(self, ring, rank):
        self.ring = ring
        self.rank = rank
        self.p = ring.p
        n = ring.nvars
        self.n = n
        self.weights = ring.weights
        self.code_shift = FIELD_BITS * n
        self.pos_shift = self.code_shift + CODE_BITS * len(self.weights)
        self.guard = sum(1 << (FIELD_BITS * i + FIELD_BITS - 1) for i in range(n))
        self.dmask = (1 << self.code_shift) - 1
        self._gb_cache = {}

    # -- packing -------------------------------------------------------

    def mono(self, exp):
        d = 0
        for i, e in enumerate(exp):
            if e >= _MAX_EXP:
                raise OverflowError("exponent too large for the packed representation")
            d |= e << (FIELD_BITS * i)
        code = 0
        for row in self.weights:
            code = (code << CODE_BITS) | sum(w * e for w, e in zip(row, exp))
        return (code << self.code_shift) | d

    def term(self, pos, exp):
        return ((self.rank - 1 - pos) << self.pos_shift) | self.mono(exp)

    def position(self, t):
        return self.rank - 1 - (t >> self.pos_shift)

    def exponent(self, t):
        return tuple((t >> (FIELD_BITS * i)) & _FIELD_MASK for i in range(self.n))

    def encode(self, vec):
        out = {}
        for pos, f in enumerate(vec):
            for exp, c in f.terms.items():
                out[self.term(pos, exp)] = c
        return out

    def decode(self, poly):
        parts = [{} for _ in range(self.rank)]
        for t, c in poly.items():
            parts[self.position(t)][self.exponent(t)] = c
        return tuple(Polynomial(self.ring, part, _clean=True) for part in parts)

    def lcm(self, s, t):
        es, et = self.exponent(s), self.exponent(t)
        exp = tuple(a if a > b else b for a, b in zip(es, et))
        return (s >> self.pos_shift << self.pos_shift) | self.mono(exp)

    def divides(self, s, t):
        """Whether lead term ``s`` divides term ``t`` (same position required)."""
        if (s >> self.pos_shift) != (t >> self.pos_shift):
            return False
        g = self.guard
        return (((t | g) - (s & self.dmask)) & g) == g

    def coprime(self, s, t):
        es, et = self.exponent(s), self.exponent(t)
        return not any(a and b for a, b in zip(es, et))

    # -- reduction -----------------------------------------------------

    def make_reducer(self, basis):
        """Index a list of monic polynomials (dicts) by lead position."""
        table = {}
        for f in basis:
            lt = max(f)
            rest = [(t, c) for t, c in f.items() if t != lt]
            rest.sort(reverse=True)
            table.setdefault(lt >> self.pos_shift, []).append((lt & self.dmask, lt, rest))
        for entries in table.values():
            entries.sort(key=lambda e: e[1])
        return table

    def normal_form(self, f, reducer, full=True):
        """Remainder of ``f`` (dict) modulo the indexed basis ``reducer``.

        With ``full=False`` only the leading term is reduced repeatedly; the
        result then has an irreducible lead (or is zero).
        """
        if not f:
            return {}
        p = self.p
        g = self.guard
        shift = self.pos_shift
        acc = dict(f)
        heap = [-t for t in acc]
        heapq.heapify(heap)
        rem = {}
        while heap:
            t = -heapq.heappop(heap)
            c = acc.pop(t, 0)
            if not c:
                continue
            found = None
            for dl, lt, rest in reducer.get(t >> shift, ()):
                if (((t | g) - dl) & g) == g:
                    found = (lt, rest)
                    break
            if found is None:
                rem[t] = c
                if not full:
                    rem.update(acc)
                    return rem
                continue
            lt, rest = found
            m = t - lt
            for s, d in rest:
                k = s + m
                old = acc.get(k)
                v = ((old or 0) - c * d) % p
                if v:
                    if old is None:
                        heapq.heappush(heap, -k)
                    acc[k] = v
                elif old is not None:
                    del acc[k]
        return rem

    def monic(self, f):
        lt = max(f)
        c = f[lt]
        if c == 1:
            return f
        inv = pow(c, -1, self.p)
        p = self.p
        return {t: (v * inv) % p for t, v in f.items()}

    # -- Buchberger ----------------------------------------------------

    def groebner(self, gens):
        """Reduced, monic Gröbner basis of the dicts ``gens``, lead-descending."""
        gens = [f for f in gens if f]
        key = frozenset(frozenset(f.items()) for f in gens)
        hit = self._gb_cache.get(key)
        if hit is not None:
            return hit
        result = self._buchberger(gens)
        if len(self._gb_cache) > 20000:
            self._gb_cache.clear()
        self._gb_cache[key] = result
        return result

    def _buchberger(self, gens):
        p = self.p
        polys = []  # every basis element ever added, monic, as (lead, dict)
        live = []  # indices currently in G
        pairs = []  # list of (lcm, i, j)
        use_product = self.rank == 1

        def spoly(i, j, lcm_t):
            li, fi = polys[i]
            lj, fj = polys[j]
            mi = lcm_t - li
            mj = lcm_t - lj
            out = {}
            for t, c in fi.items():
                out[t + mi] = c
            for t, c in fj.items():
                k = t + mj
                v = (out.get(k, 0) - c) % p
                if v:
                    out[k] = v
                else:
                    out.pop(k, None)
            return out

        def update(h_idx):
            nonlocal pairs, live
            lh, _ = polys[h_idx]
            cands = []
            for i in live:
                li = polys[i][0]
                if (li >> self.pos_shift) == (lh >> self.pos_shift):
                    cands.append((self.lcm(lh, li), i))
            # chain criterion among the new pairs
            kept = []
            for idx, (l1, i) in enumerate(cands):
                if use_product and self.coprime(lh, polys[i][0]):
                    kept.append((l1, i, True))
                    continue
                redundant = False
                for jdx, (l2, _) in enumerate(cands):
                    if jdx != idx and self.divides(l2, l1) and (l2 != l1 or jdx < idx):
                        redundant = True
                        break
                if not redundant:
                    kept.append((l1, i, False))
            new_pairs = [(l, i, h_idx) for l, i, copr in kept if not copr]
            # drop old pairs that the new lead makes redundant
            old = []
            for l, i, j in pairs:
                if (
                    self.divides(lh, l)
                    and self.lcm(polys[i][0], lh) != l
                    and self.lcm(polys[j][0], lh) != l
                ):
                    continue
                old.append((l, i, j))
            pairs = old + new_pairs
            heapq.heapify(pairs)
            live = [i for i in live if not self.divides(lh, polys[i][0])] + [h_idx]

        def reducer_for_live():
            return self.make_reducer([polys[i][1] for i in live])

        start = sorted((self.monic(f) for f in gens), key=max)
        for f in start:
            h = self.normal_form(f, reducer_for_live(), full=False)
            if h:
                h = self.monic(h)
                polys.append((max(h), h))
                update(len(polys) - 1)
        reducer = reducer_for_live()
        while pairs:
            l, i, j = heapq.heappop(pairs)
            s = spoly(i, j, l)
            h = self.normal_form(s, reducer, full=False)
            if h:
                h = self.monic(h)
                polys.append((max(h), h))
                update(len(polys) - 1)
                reducer = reducer_for_live()
        basis = [polys[i][1] for i in live]
        return self._interreduce(basis)

    def _interreduce(self, basis):
        basis = sorted(basis, key=max)
        out = []
        for idx, f in enumerate(basis):
            lt = max(f)
            others = self.make_reducer(basis[:idx] + basis[idx + 1:])
            tail = {t: c for t, c in f.items() if t != lt}
            tail = self.normal_form(tail, others)
            tail[lt] = f[lt]
            out.append(self.monic(tail))
        out.sort(key=max, reverse=True)
        return out


@lru_cache(maxsize=None)
def engine(ring, rank):
    return ModuleEngine(ring, rank)
