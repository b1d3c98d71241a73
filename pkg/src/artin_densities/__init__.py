"""Exact primitive root densities over Q.

Closed forms (:mod:`.densities`), a finite-level enumeration engine
(:mod:`.finite_model`) and prime sieve statistics (:mod:`.sieve_verify`)
compute the same numbers along independent routes.
"""

from .densities import (
    ap_density,
    ap_naive_measure,
    artin_density,
    generic_density,
    inclusion_exclusion_density,
    near_density,
    near_naive_measure,
)
from .problem import ExactDensity, InvalidSpec, ProblemSpec, VanishingVerdict, artin_constant
from .radical import decompose, entanglement

__all__ = [
    "ExactDensity",
    "InvalidSpec",
    "ProblemSpec",
    "VanishingVerdict",
    "ap_density",
    "ap_naive_measure",
    "artin_constant",
    "artin_density",
    "decompose",
    "entanglement",
    "generic_density",
    "inclusion_exclusion_density",
    "near_density",
    "near_naive_measure",
]
