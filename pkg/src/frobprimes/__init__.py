"""Special prime ideals of Frobenius maps on E^alpha over F_p[x_1..x_n]."""

from .errors import AlgebraError, CapabilityError, ParseError
from .ring import Ring, Polynomial, parse_polynomial
from .matrix import PolyMatrix
from .modules import Submodule, parse_ideal, parse_module
from .decomposition import minimal_primes, is_prime, factor, dimension, singular_locus_ideal
from .frobenius import (
    FrobMatrix,
    ie_module,
    star_closure,
    is_compatible,
    nilpotent_kernel,
    is_special_prime,
)
from .special import alpha1_special_primes, find_special_primes
from .nearsplit import NearSplitting, apply_near_splitting, is_phi_compatible, compatible_prime_annihilators
from .problem import ProblemFile, parse_problem

__version__ = "0.1.0"
