"""Frobenius near-splittings of R^alpha.

A near-splitting ``phi = Phi ∘ F_* U`` is stored as its matrix U.  Its value on
a submodule V is ``I_1(U V)``, so the projection Phi onto the
``x_1^(p-1)...x_n^(p-1)`` summand of F_* R never has to be built and the choice
of basis for F_* R does not affect anything computed here.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import AlgebraError
from .frobenius import FrobMatrix, ie_module
from .matrix import PolyMatrix
from .modules import Submodule
from .special import find_special_primes


@dataclass(frozen=True)
class NearSplitting:
    U: PolyMatrix

    def __post_init__(self):
        if not self.U.is_square:
            raise AlgebraError("a near-splitting needs a square matrix")

    @property
    def alpha(self):
        return self.U.rows

    @property
    def ring(self):
        return self.U.ring

    def frobenius(self):
        """The Frobenius map on E^alpha dual to this near-splitting."""
        return FrobMatrix(self.U, 1)


def apply_near_splitting(S, V):
    """``phi(F_* V) = I_1(U V)``."""
    if V.rank != S.alpha:
        raise AlgebraError(f"rank mismatch: module of rank {V.rank}, expected {S.alpha}")
    image = Submodule(V.ring, V.rank, [S.U.apply(v) for v in V.gens])
    return ie_module(image, 1)


def is_phi_compatible(S, V):
    return V.contains_module(apply_near_splitting(S, V))


@dataclass
class CompatibleAnnihilator:
    prime: Submodule
    module: Submodule
    nonzero: bool


def compatible_prime_annihilators(S):
    """Prime annihilators of ``R^alpha / V`` for phi-compatible V.

    Each prime comes with the compatible module V given by the star closure
    of ``Q R^alpha``; ``nonzero`` records whether phi composed with the
    quotient map to ``R^alpha / V`` is nonzero.
    """
    report = find_special_primes(S.frobenius())
    image = apply_near_splitting(S, Submodule.free(S.ring, S.alpha))
    out = []
    for cert in report.certificates:
        V = cert.closure
        if not is_phi_compatible(S, V):
            raise AlgebraError(f"star closure of {cert.prime} is not compatible")
        out.append(CompatibleAnnihilator(cert.prime, V, not V.contains_module(image)))
    return report, out
