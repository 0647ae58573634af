"""Enumeration of special primes.

``alpha1_special_primes`` handles a single polynomial u (the Frobenius map
``u T^e``).  For square matrices of size alpha > 1 the driver
``find_special_primes`` keeps a worklist of special primes and, for each one,
finds the special primes minimally containing it either by bootstrapping with
an element or by changing basis over a principal localization so that the
problem drops to size alpha - 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .decomposition import (
    dimension,
    minimal_primes,
    poly_gcd,
    singular_locus_ideal,
    ideal_sort_key,
)
from .errors import AlgebraError, CapabilityError
from .frobenius import (
    FrobMatrix,
    ie_module,
    iterated_matrix,
    nilpotent_kernel,
    nonnilpotence_witness,
    star_closure,
)
from .matrix import PolyMatrix
from .modules import Submodule, intersect_all

MAX_DEPTH = 64


# -- small helpers ---------------------------------------------------------------


def _largest_first(f):
    """Sort key putting larger polynomials (termwise, in the ring order) first."""
    key = f.ring.sort_key
    return tuple(tuple(-k for k in key(e)) + (-c,) for e, c in f.sorted_terms())


def _not_in(P, f):
    return bool(f) and not P.contains((f,))


def pick_pivot(vectors, P):
    """Choose an entry outside P: lowest degree, then fewest nonzero entries
    in its vector, then largest in the monomial order.

    Returns ``(entry, vector)`` or ``None``.
    """
    best = None
    for v in vectors:
        nnz = sum(1 for f in v if f)
        for f in v:
            if _not_in(P, f):
                key = (f.degree(), nnz, _largest_first(f))
                if best is None or key < best[0]:
                    best = (key, f, v)
    if best is None:
        return None
    return best[1], best[2]


def _ideal(ring, gens):
    return Submodule.ideal(ring, list(gens))


def _strictly_contains(Q, P):
    return Q != P and Q.contains_module(P)


class _Trace:
    def __init__(self, enabled):
        self.enabled = enabled
        self.lines = []
        self.depth = 0

    def log(self, text):
        if self.enabled:
            self.lines.append("  " * self.depth + text)

    def nest(self):
        trace = self

        class _Ctx:
            def __enter__(self_inner):
                trace.depth += 1

            def __exit__(self_inner, *exc):
                trace.depth -= 1

        return _Ctx()


def _fmt(primes):
    return "{" + ", ".join(str(q) for q in primes) + "}"


# -- localized matrices ----------------------------------------------------------


@dataclass(frozen=True)
class LocalizedMatrix:
    """The matrix ``denom**(-exp) * numerators`` over the localization R_denom."""

    numerators: PolyMatrix
    denom: object
    exp: int = 0
    inverse: "LocalizedMatrix | None" = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if not self.denom:
            raise AlgebraError("the denominator must be nonzero")
        if self.exp < 0:
            raise AlgebraError("the denominator exponent must be nonnegative")

    def canonical(self):
        """Strip common factors of the denominator from the numerators."""
        num, k = self.numerators, self.exp
        a = self.denom
        while k > 0 and all(x.divisible_by(a) for row in num.entries for x in row):
            num = num.map(lambda x: x.exact_div(a))
            k -= 1
        return LocalizedMatrix(num, a, k, self.inverse)

    def bracket_power(self, e):
        q = self.denom.ring.p ** e
        return LocalizedMatrix(self.numerators.bracket_power(e), self.denom, self.exp * q)

    def __mul__(self, other):
        if isinstance(other, PolyMatrix):
            return LocalizedMatrix(self.numerators * other, self.denom, self.exp)
        if self.denom != other.denom:
            raise AlgebraError("localized matrices with different denominators")
        return LocalizedMatrix(
            self.numerators * other.numerators, self.denom, self.exp + other.exp
        )

    def __rmul__(self, other):
        if isinstance(other, PolyMatrix):
            return LocalizedMatrix(other * self.numerators, self.denom, self.exp)
        return NotImplemented

    def is_inverse_of(self, other):
        prod = self * other
        scale = self.denom ** prod.exp
        n = prod.numerators.rows
        return prod.numerators == PolyMatrix.identity(self.denom.ring, n) * scale

    def __str__(self):
        if self.exp == 0:
            return str(self.numerators)
        return f"({self.denom})^-{self.exp} * {self.numerators}"


def make_unimodular(c, a):
    """X invertible over R_a with ``X c = e_alpha`` (and its inverse).

    Rows other than the pivot row are cleared with the pivot entry, the
    pivot row is scaled by 1/a and finally swapped into the last position.
    The inverse is the identity with the pivot column replaced by c, with the
    same swap applied to the columns.
    """
    c = tuple(c)
    ring = a.ring
    if not a:
        raise AlgebraError("the pivot must be nonzero")
    try:
        k = c.index(a)
    except ValueError:
        raise AlgebraError("the pivot is not an entry of the vector") from None
    n = len(c)
    zero, one = ring.zero, ring.one
    rows = []
    for i in range(n):
        if i == k:
            rows.append([one if j == k else zero for j in range(n)])
        else:
            rows.append([a if j == i else (-c[i] if j == k else zero) for j in range(n)])
    perm = list(range(n))
    perm[k], perm[n - 1] = perm[n - 1], perm[k]
    num = PolyMatrix(ring, [rows[perm[i]] for i in range(n)])
    inv_cols = []
    for j in range(n):
        if j == k:
            inv_cols.append(c)
        else:
            inv_cols.append(tuple(one if i == j else zero for i in range(n)))
    inv_cols = [inv_cols[perm[j]] for j in range(n)]
    inv = LocalizedMatrix(PolyMatrix.from_columns(ring, inv_cols), a, 0)
    X = LocalizedMatrix(num, a, 1, inv).canonical()
    X = LocalizedMatrix(X.numerators, a, X.exp, inv)
    return X


def reduce_alpha(F, X, W=None):
    """Change basis by X over R_a.

    Returns ``(F', W')`` with ``U' = a^nu X^[p^e] U X^-1`` for the least
    nu >= 0 making it polynomial, and ``W' = X W_a ∩ R^alpha`` (``None``
    when W is not given).
    """
    if X.inverse is None or not X.is_inverse_of(X.inverse):
        raise AlgebraError("X is not invertible over the localization")
    a = X.denom
    prod = X.bracket_power(F.e) * F.U * X.inverse
    prod = prod.canonical()
    F2 = FrobMatrix(prod.numerators, F.e)
    if W is None:
        return F2, None
    moved = Submodule(W.ring, W.rank, [X.numerators.apply(v) for v in W.gens])
    return F2, moved.saturation(a)


# -- alpha = 1 -------------------------------------------------------------------


def alpha1_special_primes(u, e=1):
    """Special primes of the map ``u T^e`` reached from (0).

    A prime is expanded while the action on it is nonzero (``I_e(uR)`` not
    inside it).  The candidates over an expanded P are the minimal primes of
    the star closures of ``I_e(uR) + P``, of the singular-locus ideal of P,
    and of ``((u) + P^[q]) : (P^[q] : P) + P``; the special ones are kept.
    Primes on which the action vanishes are reported but not expanded.
    """
    if not u:
        raise AlgebraError("u must be nonzero")
    ring = u.ring
    F = FrobMatrix(PolyMatrix(ring, [[u]]), e)
    Iu = ie_module(_ideal(ring, [u]), e)
    zero = Submodule.zero(ring, 1)
    found = [zero]
    queue = [zero]
    while queue:
        P = queue.pop(0)
        if P.contains_module(Iu):
            continue
        candidates = [Iu + P]
        if not P.is_zero():
            candidates.append(singular_locus_ideal(P))
        Pq = P.bracket_power(e)
        candidates.append((_ideal(ring, [u]) + Pq).quotient(Pq.quotient(P)) + P)
        for L in candidates:
            if L.is_unit():
                continue
            closed = star_closure(L, F)
            if closed.is_unit():
                continue
            for Q in minimal_primes(closed):
                if Q == P or Q in found:
                    continue
                if not _is_special(Q, F):
                    continue
                found.append(Q)
                queue.append(Q)
    found.sort(key=ideal_sort_key)
    return found


# -- certification -----------------------------------------------------------------


_SPECIAL_CACHE = {}


def _is_special(Q, F):
    key = (F, Q)
    hit = _SPECIAL_CACHE.get(key)
    if hit is None:
        W = star_closure(Q.times_free(F.alpha), F)
        hit = W.annihilator() == Q
        if len(_SPECIAL_CACHE) > 20000:
            _SPECIAL_CACHE.clear()
        _SPECIAL_CACHE[key] = hit
    return hit


@dataclass
class PrimeCertificate:
    prime: Submodule
    closure: Submodule
    annihilator: Submodule
    witness: tuple | None

    @property
    def special(self):
        return self.annihilator == self.prime

    @property
    def nonnilpotent(self):
        return self.witness is not None


def certify(Q, F, kernel=None):
    """Star closure, annihilator and non-nilpotence witness for Q."""
    W = star_closure(Q.times_free(F.alpha), F)
    K = nilpotent_kernel(F) if kernel is None else kernel
    return PrimeCertificate(Q, W, W.annihilator(), nonnilpotence_witness(W, F, K))


@dataclass
class SpecialPrimeReport:
    frob: FrobMatrix
    primes: list
    certificates: list
    trace: list = field(default_factory=list)

    def all_special(self):
        return all(c.special for c in self.certificates)

    def all_nonnilpotent(self):
        return all(c.nonnilpotent for c in self.certificates)


# -- alpha > 1 -------------------------------------------------------------------


@dataclass(frozen=True)
class GVDecomposition:
    """``a1^mu U ≡ g V`` modulo ``P^[p]``."""

    a1: object
    g: object
    V: PolyMatrix
    mu: int = 1


def gv_decomposition(F, P):
    ring = F.ring
    Pp = P.bracket_power(F.e)
    C = Pp.quotient(P)
    gens = sorted((g for (g,) in C.gb), key=lambda g: (g.degree(), _largest_first(g)))
    for g in gens:
        if Pp.contains((g,)):
            continue
        colon = (_ideal(ring, [g]) + Pp).quotient(C)
        outside = [h for (h,) in colon.gb if _not_in(P, h)]
        if not outside:
            continue
        a1 = min(outside, key=lambda h: (h.degree(), _largest_first(h)))
        target = Submodule.ideal(ring, [g] + [h for (h,) in Pp.gb])
        rows = []
        for row in F.U.entries:
            new = []
            for entry in row:
                if not entry:
                    new.append(ring.zero)
                    continue
                lift = target.lift_membership((a1 * entry,))
                if lift is None:
                    break
                new.append(lift[0])
            else:
                rows.append(new)
                continue
            break
        else:
            V = PolyMatrix(ring, rows)
            diff = F.U * a1 - V * g
            if not all(Pp.contains((x,)) for row in diff.entries for x in row):
                raise AlgebraError("decomposition check failed")
            return GVDecomposition(a1, g, V, 1)
    raise CapabilityError(f"no rank-one decomposition found over {P}")


def kernel_mod_prime(V, P):
    """A vector w with ``V w ≡ 0`` mod P and some entry outside P."""
    ring = V.ring
    n = V.cols
    if not V.is_square:
        raise AlgebraError("expected a square matrix")
    if not P.contains((V.determinant(),)):
        raise AlgebraError("the matrix is invertible modulo the prime")
    A = [[P.reduce(x) for x in row] for row in V.entries]
    pivots = []
    r = 0
    for col in range(n):
        piv = None
        for i in range(r, len(A)):
            if A[i][col]:
                piv = i
                break
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        for i in range(len(A)):
            if i != r and A[i][col]:
                f, h = A[r][col], A[i][col]
                A[i] = [P.reduce(f * A[i][j] - h * A[r][j]) for j in range(n)]
        pivots.append(col)
        r += 1
    free = [j for j in range(n) if j not in pivots]
    if not free:
        raise AlgebraError("no kernel modulo the prime")
    fcol = free[0]
    w = [ring.zero] * n
    prod = ring.one
    for row, col in enumerate(pivots):
        prod = prod * A[row][col]
    w[fcol] = prod
    for row, col in enumerate(pivots):
        others = ring.one
        for row2, col2 in enumerate(pivots):
            if row2 != row:
                others = others * A[row2][col2]
        w[col] = -A[row][fcol] * others
    g = ring.zero
    for x in w:
        g = poly_gcd(g, x)
    if not g.is_constant() and not P.contains((g,)):
        w = [x.exact_div(g) for x in w]
    w = tuple(w)
    if not all(P.contains((x,)) for x in V.apply(w)):
        raise AlgebraError("kernel vector check failed")
    if not any(_not_in(P, x) for x in w):
        raise AlgebraError("kernel vector lies in P")
    return w


class _Search:
    def __init__(self, F, trace):
        self.F = F
        self.trace = trace
        self.kernel = nilpotent_kernel(F)

    def admit(self, candidates, P, label):
        """Keep candidates strictly containing P that are special for F."""
        out = []
        for Q in candidates:
            if _strictly_contains(Q, P) and _is_special(Q, self.F) and Q not in out:
                out.append(Q)
        self.trace.log(f"{label}: {_fmt(out)}")
        return out


def bootstrap_step(P, a, F):
    """Minimal primes of the annihilator of ``R^alpha / ((P + aR) R^alpha)^star``
    that are special."""
    if not _not_in(P, a):
        raise AlgebraError("the element must lie outside P")
    ring = F.ring
    W = star_closure((P + _ideal(ring, [a])).times_free(F.alpha), F)
    ann = W.annihilator()
    if ann.is_unit():
        return []
    return [Q for Q in minimal_primes(ann) if _is_special(Q, F)]


def _all_special(F, depth, trace):
    """Every special prime the algorithm produces for F (any alpha)."""
    if F.alpha == 1:
        u = F.U[0, 0]
        if not u:
            return []
        return alpha1_special_primes(u, F.e)
    if nilpotent_kernel(F).is_zero():
        return []
    return _driver(F, trace, depth)


def _reduction_branch(P, F_cur, vector, a, search, depth):
    X = make_unimodular(vector, a)
    F2, _ = reduce_alpha(F_cur, X)
    block = F2.U.submatrix(range(F2.alpha - 1), range(F2.alpha - 1))
    trace = search.trace
    trace.log(f"reduce over R_({a}): block {block}")
    with trace.nest():
        sub = _all_special(FrobMatrix(block, F2.e), depth + 1, trace)
    return search.admit(sub, P, "block primes kept")


def zero_column_step(F1, P, search=None, depth=0):
    """Special primes over P when the last column of ``F1.U`` is zero."""
    U = F1.U
    alpha = F1.alpha
    if any(U[i, alpha - 1] for i in range(alpha)):
        raise AlgebraError("the last column is not zero")
    if search is None:
        search = _Search(F1, _Trace(False))
    trace = search.trace
    ring = F1.ring
    if alpha == 1 or U.is_zero():
        trace.log("zero action: nothing to add")
        return []
    U0 = U.submatrix(range(alpha - 1), range(alpha - 1))
    F0 = FrobMatrix(U0, F1.e)
    PR0 = P.times_free(alpha - 1)
    K0 = nilpotent_kernel(F0)
    if PR0.contains_module(K0):
        # find the first level at which the block acts as zero over P
        Ke = Submodule.free(ring, alpha - 1)
        level = 0
        while True:
            level += 1
            Ke = ie_module(F0.apply(Ke), F0.e)
            if PR0.contains_module(Ke):
                break
        Ue = iterated_matrix(U, F1.e, level)
        Pq = P.bracket_power(level * F1.e)
        last = [Pq.reduce(g) for g in Ue.row(alpha - 1)[: alpha - 1]]
        trace.log(f"nilpotent block (level {level}): last row {[str(g) for g in last]}")
        cands = []
        for g in last:
            if g:
                cands.extend(alpha1_special_primes(g, level * F1.e))
        return _dedupe(search.admit(cands, P, "row candidates kept"))
    trace.log("block not nilpotent over P")
    with trace.nest():
        block_primes = _all_special(F0, depth + 1, trace)
    above = [Q for Q in block_primes if _strictly_contains(Q, P)]
    minimal = [Q for Q in above if not any(_strictly_contains(Q, O) for O in above)]
    tau = intersect_all(minimal) if minimal else Submodule.free(ring, 1)
    trace.log(f"tau = {tau}")
    tauK = Submodule(
        ring,
        alpha - 1,
        [tuple(t * x for x in k) for (t,) in tau.gb for k in K0.gb],
    )
    padded = Submodule(ring, alpha, [k + (ring.zero,) for k in tauK.gens])
    Mp = star_closure(ie_module(F1.apply(padded), F1.e), F1)
    trace.log(f"M' = {Mp}")
    choice = pick_pivot(Mp.gb, P)
    if choice is None:
        raise AlgebraError("no entry outside P in the closure")
    a, vec = choice
    out = search.admit(bootstrap_step(P, a, F1), P, f"bootstrap with {a}")
    out += _reduction_branch(P, F1, vec, a, search, depth)
    return _dedupe(out)


def minimal_special_over(P, F, search=None, depth=0):
    """Special primes minimally containing the special prime P."""
    if depth > MAX_DEPTH:
        raise CapabilityError("recursion depth limit reached")
    if search is None:
        search = _Search(F, _Trace(False))
    trace = search.trace
    ring = F.ring
    if not P.is_zero() and dimension(P) == 0:
        trace.log("maximal ideal: nothing above")
        return []
    PR = P.times_free(F.alpha)
    M = star_closure(PR, F)
    if M != PR:
        choice = pick_pivot(M.gb, P)
        a, vec = choice
        trace.log(f"case I: closure is larger, entry {a}")
        with trace.nest():
            out = search.admit(bootstrap_step(P, a, F), P, f"bootstrap with {a}")
            out += _reduction_branch(P, F, vec, a, search, depth)
        return _dedupe(out)
    D = gv_decomposition(F, P)
    d = D.V.determinant()
    trace.log(f"case II: g = {D.g}, a1 = {D.a1}, det V = {d}")
    with trace.nest():
        if P.contains((d,)):
            w = kernel_mod_prime(D.V, P)
            a2, _ = pick_pivot([w], P)
            X = make_unimodular(w, a2)
            F1, _ = reduce_alpha(F, X)
            Pq = P.bracket_power(F.e)
            U1 = F1.U.map(Pq.reduce)
            trace.log(f"det in P: kernel {[str(x) for x in w]}, reduced matrix {U1}")
            out = search.admit(bootstrap_step(P, D.a1 * a2, F), P, f"bootstrap with {D.a1 * a2}")
            with trace.nest():
                sub = zero_column_step(FrobMatrix(U1, F.e), P, _Search(FrobMatrix(U1, F.e), trace), depth + 1)
            out += search.admit(sub, P, "zero-column primes kept")
        else:
            out = search.admit(bootstrap_step(P, D.a1 * d, F), P, f"bootstrap with {D.a1 * d}")
            if D.g.is_constant():
                rank_one = [Submodule.zero(ring, 1)]
            else:
                rank_one = alpha1_special_primes(D.g, F.e)
            rank_one = [Q for Q in rank_one if not Q.contains((d,))]
            out += search.admit(rank_one, P, f"primes of {D.g}")
    return _dedupe(out)


def _dedupe(primes):
    out = []
    for q in primes:
        if q not in out:
            out.append(q)
    return out


def _driver(F, trace, depth=0):
    if F.alpha > 1 and F.e > 1:
        raise CapabilityError("matrices of size > 1 are supported only for e = 1")
    if depth > MAX_DEPTH:
        raise CapabilityError("recursion depth limit reached")
    search = _Search(F, trace)
    zero = Submodule.zero(F.ring, 1)
    found = [zero]
    done = []
    trace.log(f"matrix {F.U}: start from (0)")
    while len(done) < len(found):
        P = next(q for q in found if q not in done)
        trace.log(f"expand {P}")
        with trace.nest():
            new = minimal_special_over(P, F, search, depth)
        for Q in new:
            if Q not in found:
                found.append(Q)
        done.append(P)
    found.sort(key=ideal_sort_key)
    return found


def find_special_primes(F, trace=False):
    """Run the enumeration and certify every reported prime.

    For a 1 x 1 matrix the report keeps the primes with non-nilpotent action;
    for larger matrices it lists every prime the worklist produces.
    """
    if not isinstance(F, FrobMatrix):
        F = FrobMatrix(F)
    K = nilpotent_kernel(F)
    if K.is_zero():
        raise AlgebraError("the Frobenius action is nilpotent")
    tr = _Trace(trace)
    if F.alpha == 1:
        primes = alpha1_special_primes(F.U[0, 0], F.e)
        certs = [certify(Q, F, K) for Q in primes]
        kept = [c for c in certs if c.nonnilpotent and c.special]
        tr.log(f"single polynomial {F.U[0, 0]}: {_fmt(primes)}")
        tr.log(f"non-nilpotent: {_fmt(c.prime for c in kept)}")
        return SpecialPrimeReport(F, [c.prime for c in kept], kept, tr.lines)
    primes = _driver(F, tr)
    certs = [certify(Q, F, K) for Q in primes]
    for c in certs:
        if not c.special:
            raise AlgebraError(f"certification failed for {c.prime}")
    return SpecialPrimeReport(F, primes, certs, tr.lines)
