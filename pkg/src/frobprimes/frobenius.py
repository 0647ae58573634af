"""Frobenius roots, star closures and nilpotent kernels.

A Frobenius map on the injective hull side is carried by a square matrix U
and a level e: a submodule W of R^alpha is compatible when
``U*W ⊆ W^[p^e]``.  Everything here works with such submodules W.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import AlgebraError
from .matrix import PolyMatrix
from .modules import Submodule
from .ring import Polynomial

NILPOTENT_KERNEL_CAP = 20
STAR_CLOSURE_CAP = 500


@dataclass(frozen=True)
class FrobMatrix:
    """The pair (U, e) describing the Frobenius action ``U^t T^e``."""

    U: PolyMatrix
    e: int = 1

    def __post_init__(self):
        if not self.U.is_square:
            raise AlgebraError("the Frobenius matrix must be square")
        if self.e < 1:
            raise AlgebraError("the Frobenius level e must be positive")

    @property
    def ring(self):
        return self.U.ring

    @property
    def alpha(self):
        return self.U.rows

    @property
    def p(self):
        return self.U.ring.p

    def apply(self, W):
        """The submodule ``U*W``."""
        _check_rank(W, self.alpha)
        return Submodule(W.ring, W.rank, [self.U.apply(v) for v in W.gens])


def _check_rank(W, rank):
    if W.rank != rank:
        raise AlgebraError(f"rank mismatch: module of rank {W.rank}, expected {rank}")


def bracket_power_poly(f, e):
    return f.frobenius(e)


def bracket_power_module(W, e):
    """The submodule generated by entrywise ``p^e``-th powers."""
    if e < 0:
        raise AlgebraError("e must be nonnegative")
    return W.bracket_power(e)


def ie_components(v, e):
    """Decompose ``v = sum_b u_b^[p^e] * b`` over monomials ``b = x^g``,
    ``0 <= g_i < p^e``; returns ``{g: u_b}``."""
    v = tuple(v)
    ring = v[0].ring
    q = ring.p ** e
    parts = {}
    for pos, f in enumerate(v):
        for exp, c in f.terms.items():
            base = tuple(k % q for k in exp)
            root = tuple(k // q for k in exp)
            parts.setdefault(base, [dict() for _ in v])[pos][root] = c
    return {
        b: tuple(Polynomial(ring, comp, _clean=True) for comp in comps)
        for b, comps in parts.items()
    }


def ie_vector(v, e):
    """``I_e(R v)``: the module spanned by the components of ``v``."""
    if e < 1:
        raise AlgebraError("e must be positive")
    v = tuple(v)
    if not v:
        raise AlgebraError("empty vector")
    ring = v[0].ring
    comps = ie_components(v, e)
    return Submodule(ring, len(v), [comps[b] for b in sorted(comps, key=ring.sort_key)])


def ie_module(W, e):
    """``I_e(W)``, the smallest L with ``W ⊆ L^[p^e]``."""
    if e < 1:
        raise AlgebraError("e must be positive")
    gens = []
    ring = W.ring
    for v in W.gens:
        comps = ie_components(v, e)
        gens.extend(comps[b] for b in sorted(comps, key=ring.sort_key))
    return Submodule(ring, W.rank, gens)


_STAR_CACHE = {}


def star_closure(V, F):
    """Smallest ``W ⊇ V`` with ``U*W ⊆ W^[p^e]``."""
    _check_rank(V, F.alpha)
    key = (F, V)
    hit = _STAR_CACHE.get(key)
    if hit is not None:
        return hit
    W = V
    for _ in range(STAR_CLOSURE_CAP):
        nxt = W + ie_module(F.apply(W), F.e)
        nxt = Submodule(nxt.ring, nxt.rank, nxt.gb)
        if nxt == W:
            break
        W = nxt
    else:
        raise AlgebraError("star closure did not stabilize")
    if len(_STAR_CACHE) > 5000:
        _STAR_CACHE.clear()
    _STAR_CACHE[key] = W
    return W


def is_compatible(W, F):
    _check_rank(W, F.alpha)
    target = W.bracket_power(F.e)
    return all(target.contains(F.U.apply(v)) for v in W.gens)


def iterated_matrix(U, e, k):
    """``U^[p^((k-1)e)] ... U^[p^e] U``, the matrix of the k-th iterate."""
    out = U
    for j in range(1, k):
        out = U.bracket_power(j * e) * out
    return out


def nilpotent_kernel(F):
    """The submodule K such that the action on E(W) is nilpotent iff K ⊆ W.

    Computed as the stable value of ``K_0 = R^alpha``,
    ``K_{j+1} = I_e(U K_j)``; the j-th term equals ``I_{je}`` of the column
    space of the j-th iterate of U.
    """
    K = Submodule.free(F.ring, F.alpha)
    for _ in range(NILPOTENT_KERNEL_CAP + 1):
        nxt = ie_module(F.apply(K), F.e)
        nxt = Submodule(nxt.ring, nxt.rank, nxt.gb)
        if nxt == K:
            return K
        K = nxt
    raise AlgebraError(
        f"nilpotent kernel did not stabilize within {NILPOTENT_KERNEL_CAP} steps"
    )


def is_special_prime(Q, F):
    """Whether ``Q`` is the annihilator of ``R^alpha / (Q R^alpha)^star``."""
    W = star_closure(Q.times_free(F.alpha), F)
    return W.annihilator() == Q


def nonnilpotence_witness(W, F, kernel=None):
    """A generator of the nilpotent kernel outside W, or ``None``."""
    K = nilpotent_kernel(F) if kernel is None else kernel
    for v in K.gb:
        if not W.contains(v):
            return v
    return None


def restriction_nonnilpotent(W, F):
    """Whether the action on E(W) is not nilpotent (W must be compatible)."""
    if not is_compatible(W, F):
        raise AlgebraError("the submodule is not compatible with the Frobenius matrix")
    return nonnilpotence_witness(W, F) is not None
