"""Factorization, minimal primes, primality, dimension and singular loci.

Multivariate factorization over F_p is delegated to FLINT (python-flint).
Minimal primes are found by a splitting recursion: an ideal is replaced by
finitely many strictly larger ideals whose zero sets cover its zero set, until
every branch is certified prime.  Certification uses

* principal ideals with an irreducible generator,
* for zero-dimensional ideals, the Frobenius endomorphism of the finite
  F_p-algebra R/I (injective and with fixed field F_p exactly when R/I is a
  field),
* for positive-dimensional ideals, a primitive element of R/I over the
  rational function field of a maximal independent set of variables.
"""

from __future__ import annotations

import itertools
import random
from functools import lru_cache

import flint

from .errors import AlgebraError, CapabilityError
from .matrix import PolyMatrix
from .modules import Submodule
from .ring import Polynomial, Ring

MAX_SPLIT_DEPTH = 200
MAX_PRIMITIVE_TRIALS = 60


# -- factorization -------------------------------------------------------------


@lru_cache(maxsize=None)
def _flint_ctx(p, variables):
    return flint.nmod_mpoly_ctx.get(variables, modulus=p)


def to_flint(f):
    ctx = _flint_ctx(f.ring.p, f.ring.vars)
    return ctx.from_dict(dict(f.terms))


def from_flint(ring, g):
    return Polynomial(ring, {tuple(int(k) for k in e): int(c) for e, c in g.to_dict().items()})


def factor(f):
    """Irreducible monic factors of ``f`` with multiplicities.

    The product of the returned powers equals ``f`` up to a nonzero scalar.
    """
    if not isinstance(f, Polynomial):
        raise AlgebraError("factor expects a Polynomial")
    if f.is_zero():
        raise AlgebraError("cannot factor the zero polynomial")
    if f.is_constant():
        return []
    _, facs = to_flint(f).factor()
    out = [(from_flint(f.ring, g).monic(), int(m)) for g, m in facs]
    out.sort(key=lambda t: (t[0].degree(), str(t[0])))
    return out


def is_irreducible(f):
    facs = factor(f)
    return len(facs) == 1 and facs[0][1] == 1


def poly_gcd(f, g):
    if f.is_zero():
        return g.monic()
    if g.is_zero():
        return f.monic()
    return from_flint(f.ring, to_flint(f).gcd(to_flint(g))).monic()


# -- linear algebra over F_p ---------------------------------------------------


def nullspace_mod_p(rows, p):
    """Basis of ``{x | A x = 0}`` for the integer matrix ``rows`` modulo p."""
    m = len(rows)
    n = len(rows[0]) if rows else 0
    if n == 0:
        return []
    if m == 0:
        return [[int(i == j) for i in range(n)] for j in range(n)]
    mat = flint.nmod_mat(m, n, [x % p for row in rows for x in row], p)
    x, k = mat.nullspace()
    return [[int(x[i, j]) for i in range(n)] for j in range(k)]


# -- dimension -----------------------------------------------------------------


def _lead_supports(ideal):
    supports = []
    for (g,) in ideal.gb:
        exp, _ = g.lead()
        supports.append({i for i, e in enumerate(exp) if e})
    return supports


def maximal_independent_set(ideal):
    """A largest set of variable indices independent modulo ``ideal``."""
    if ideal.is_unit():
        raise AlgebraError("dimension of the unit ideal is undefined")
    n = ideal.ring.nvars
    supports = _lead_supports(ideal)
    for size in range(n, -1, -1):
        for subset in itertools.combinations(range(n), size):
            s = set(subset)
            if all(not sup <= s for sup in supports):
                return subset
    return ()


def dimension(ideal):
    """Krull dimension of ``R/ideal``."""
    return len(maximal_independent_set(ideal))


# -- minimal primes ------------------------------------------------------------


def minimal_primes(ideal):
    """The minimal primes over ``ideal`` as a sorted list of ideals."""
    if ideal.rank != 1:
        raise AlgebraError("minimal_primes expects an ideal")
    return list(_minimal_primes_cached(ideal))


@lru_cache(maxsize=4096)
def _minimal_primes_cached(ideal):
    found = []
    _split(ideal, found, 0)
    unique = []
    for q in found:
        if q not in unique:
            unique.append(q)
    minimal = [q for q in unique if not any(o != q and q.contains_module(o) for o in unique)]
    minimal.sort(key=ideal_sort_key)
    return tuple(minimal)


def ideal_sort_key(q):
    gb = q.gb
    return (len(gb), str(q))


def is_prime(ideal):
    if ideal.rank != 1:
        raise AlgebraError("is_prime expects an ideal")
    if ideal.is_unit():
        raise AlgebraError("the unit ideal is not prime")
    mp = minimal_primes(ideal)
    return len(mp) == 1 and mp[0] == ideal


def _split(ideal, found, depth):
    if depth > MAX_SPLIT_DEPTH:
        raise CapabilityError("prime decomposition recursion too deep")
    if ideal.is_unit():
        return
    if ideal.is_zero():
        found.append(ideal)
        return
    for q in found:
        if ideal.contains_module(q):
            # a known component already lies below every prime over this branch
            return
    branches = _factor_split(ideal)
    if branches is None:
        branches = _certify_or_split(ideal)
    if branches is None:
        found.append(ideal)
        return
    for b in branches:
        _split(b, found, depth + 1)


def _factor_split(ideal):
    ring = ideal.ring
    for g in ideal.generators:
        facs = factor(g)
        if len(facs) > 1 or facs[0][1] > 1:
            return [ideal + Submodule.ideal(ring, [h]) for h, _ in facs]
    return None


def _certify_or_split(ideal):
    """``None`` if ``ideal`` is prime, else a list of strictly larger ideals
    whose zero sets cover that of ``ideal``."""
    gens = ideal.generators
    if len(gens) == 1:
        return None
    indep = maximal_independent_set(ideal)
    if not indep:
        return _zero_dim_split(ideal)
    return _positive_dim_split(ideal, indep)


def standard_monomials(ideal):
    """Monomials outside the lead ideal of a zero-dimensional ideal."""
    n = ideal.ring.nvars
    leads = [g.lead()[0] for g in ideal.generators]
    out = []
    frontier = [(0,) * n]
    seen = set(frontier)
    while frontier:
        m = frontier.pop()
        if any(all(a >= b for a, b in zip(m, lead)) for lead in leads):
            continue
        out.append(m)
        for i in range(n):
            nm = m[:i] + (m[i] + 1,) + m[i + 1:]
            if nm not in seen:
                seen.add(nm)
                frontier.append(nm)
    out.sort(key=ideal.ring.sort_key)
    return out


def _zero_dim_split(ideal):
    ring = ideal.ring
    p = ring.p
    basis = standard_monomials(ideal)
    index = {m: i for i, m in enumerate(basis)}
    dim = len(basis)
    if dim == 1:
        return None
    cols = []
    for m in basis:
        img = ideal.reduce(ring.monomial(tuple(p * e for e in m)))
        col = [0] * dim
        for exp, c in img.terms.items():
            col[index[exp]] = c
        cols.append(col)
    frob = [[cols[j][i] for j in range(dim)] for i in range(dim)]

    def as_poly(vec):
        return Polynomial(ring, {basis[i]: c for i, c in enumerate(vec) if c})

    kernel = nullspace_mod_p(frob, p)
    if kernel:
        nil = as_poly(kernel[0])
        return [ideal + Submodule.ideal(ring, [nil])]
    shifted = [[frob[i][j] - (1 if i == j else 0) for j in range(dim)] for i in range(dim)]
    fixed = nullspace_mod_p(shifted, p)
    if len(fixed) <= 1:
        return None
    one = ring.one
    for vec in fixed:
        a = as_poly(vec)
        if not a.is_constant():
            return [ideal + Submodule.ideal(ring, [a - c * one]) for c in range(p)]
    raise AlgebraError("Frobenius fixed space is inconsistent")


def _positive_dim_split(ideal, indep):
    ring = ideal.ring
    n = ring.nvars
    u_idx = list(indep)
    v_idx = [i for i in range(n) if i not in indep]
    block = Ring(ring.field, [ring.vars[i] for i in v_idx + u_idx], ("elim", len(v_idx)))
    nv = len(v_idx)
    moved = ideal.change_ring(block)
    lead_coeffs = []
    for (g,) in moved.gb:
        lead_v = g.lead()[0][:nv]
        coeff = {}
        for exp, c in g.terms.items():
            if exp[:nv] == lead_v:
                coeff[(0,) * nv + exp[nv:]] = c
        lc = Polynomial(block, coeff)
        lead_coeffs.append(lc.change_ring(ring))
    h = ring.one
    for lc in lead_coeffs:
        if not lc.is_constant():
            h = _lcm(h, lc)
    if not h.is_constant():
        sat = ideal.saturation(h)
        if sat != ideal:
            return [sat, ideal + Submodule.ideal(ring, [h])]
    # ideal is the contraction of its extension to K[v], K = F_p(u)
    leads_v = [g.lead()[0][:nv] for (g,) in moved.gb]
    count = _count_standard(leads_v, nv)
    if count == 1:
        return None
    for ell in _primitive_candidates(ring, v_idx, u_idx):
        q = _minimal_polynomial(ideal, ell, v_idx, u_idx)
        if q is None:
            continue
        facs = factor(q)
        t_deg = q.degree_in(0)
        if len(facs) > 1 or facs[0][1] > 1:
            branches = []
            back = [ell] + [ring.gens()[i] for i in u_idx]
            for fac, _ in facs:
                branches.append(ideal + Submodule.ideal(ring, [fac.subs(back)]))
            return branches
        if t_deg == count:
            return None
    raise CapabilityError(
        f"could not certify primality of {ideal} (no primitive element found)"
    )


def _lcm(a, b):
    g = poly_gcd(a, b)
    return (a * b).exact_div(g)


def _count_standard(leads, nv):
    """Number of monomials in nv variables outside the given lead monomials
    (finite by zero-dimensionality over the function field)."""
    count = 0
    frontier = [(0,) * nv]
    seen = set(frontier)
    while frontier:
        m = frontier.pop()
        if any(all(a >= b for a, b in zip(m, lead)) for lead in leads):
            continue
        count += 1
        if count > 10000:
            raise CapabilityError("quotient too large for primality certification")
        for i in range(nv):
            nm = m[:i] + (m[i] + 1,) + m[i + 1:]
            if nm not in seen:
                seen.add(nm)
                frontier.append(nm)
    return count


def _primitive_candidates(ring, v_idx, u_idx):
    gens = ring.gens()
    vs = [gens[i] for i in v_idx]
    us = [gens[i] for i in u_idx]
    p = ring.p
    seen = set()

    def fresh(f):
        if f not in seen:
            seen.add(f)
            return True
        return False

    for v in vs:
        if fresh(v):
            yield v
    for a, b in itertools.permutations(vs, 2):
        for c in range(1, p):
            f = a + b.scale(c)
            if fresh(f):
                yield f
    for a, b in itertools.permutations(vs, 2):
        for u in us:
            f = a + u * b
            if fresh(f):
                yield f
    rng = random.Random(1729)
    pool = [ring.one] + us + [u * w for u in us for w in us]
    for _ in range(MAX_PRIMITIVE_TRIALS):
        f = ring.zero
        for v in vs:
            coef = ring.zero
            for m in pool:
                c = rng.randrange(p)
                if c:
                    coef = coef + m.scale(c)
            f = f + coef * v
        if f and fresh(f):
            yield f


def _minimal_polynomial(ideal, ell, v_idx, u_idx):
    """Generator of ``(ideal + (T - ell)) ∩ F_p[T, u]`` as a polynomial in
    the ring ``F_p[T, u]`` (T first), or ``None`` if that ideal is not
    principal."""
    ring = ideal.ring
    tname = _fresh_name(ring.vars)
    big_vars = [ring.vars[i] for i in v_idx] + [tname] + [ring.vars[i] for i in u_idx]
    nv = len(v_idx)
    big = Ring(ring.field, big_vars, ("elim", nv))
    gens = [g.change_ring(big) for g in ideal.generators]
    gens.append(big.var(tname) - ell.change_ring(big))
    elim = [
        g for (g,) in Submodule.ideal(big, gens).gb if not any(e[:nv] != (0,) * nv for e in g.terms)
    ]
    if len(elim) != 1:
        return None
    small = Ring(ring.field, [tname] + [ring.vars[i] for i in u_idx])
    return elim[0].change_ring(small)


def _fresh_name(names):
    k = 0
    while f"t_{k}" in names:
        k += 1
    return f"t_{k}"


# -- singular locus ------------------------------------------------------------


def jacobian_minors(gens, size):
    ring = gens[0].ring
    n = ring.nvars
    jac = [[g.diff(i) for i in range(n)] for g in gens]
    minors = []
    for rows in itertools.combinations(range(len(gens)), size):
        for cols in itertools.combinations(range(n), size):
            sub = PolyMatrix(ring, [[jac[r][c] for c in cols] for r in rows])
            d = sub.determinant()
            if d:
                minors.append(d)
    return minors


def singular_locus_ideal(prime):
    """``P`` plus the c x c minors of its Jacobian, c the height of ``P``.

    Relies on the coefficient field F_p being perfect.
    """
    ring = prime.ring
    if prime.is_zero():
        return Submodule.free(ring, 1)
    if not is_prime(prime):
        raise AlgebraError(f"{prime} is not prime")
    c = ring.nvars - dimension(prime)
    minors = jacobian_minors(prime.generators, c)
    return prime + Submodule.ideal(ring, minors)
