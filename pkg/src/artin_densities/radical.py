"""Canonical radical decomposition r = +-r0^e and the entanglement-field data."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Tuple

from .numtheory import disc_sqrt, factorize, ord_p, prime_divisors, rational_root


@dataclass(frozen=True)
class RadicalDecomposition:
    """r = r0**e (untwisted) or r = -r0**e (twisted, i.e. -r is a square).

    ``h`` is the largest integer for which r is an h-th power in Q^*.
    """

    r: Fraction
    r0: Fraction
    e: int
    twisted: bool
    h: int

    def with_r0(self, r0: Fraction) -> "RadicalDecomposition":
        """Same r and e with a different (sign-flipped) choice of r0.

        The result need not satisfy the canonical sign convention; it exists so
        that sign-choice invariance can be exercised.
        """
        r0 = Fraction(r0)
        if abs(r0) != abs(self.r0):
            raise ValueError("r0 can only change by sign")
        return RadicalDecomposition(self.r, r0, self.e, self.twisted, self.h)


@dataclass(frozen=True)
class EntanglementData:
    d: int  # disc of K = Q(sqrt(r0))
    d2: int  # 2-part of |d|, one of 1, 4, 8
    odd_critical_primes: Tuple[int, ...]
    e2: int  # 2-part of e
    D_r: int  # disc of Q(sqrt(r))


def _check_r(r) -> Fraction:
    r = Fraction(r)
    if r in (0, 1, -1):
        raise ValueError(f"r must be a rational other than 0 and +-1, got {r}")
    return r


def decompose(r) -> RadicalDecomposition:
    r = _check_r(r)
    exps = {}
    for p, k in factorize(r.numerator if r > 0 else -r.numerator):
        exps[p] = k
    for p, k in factorize(r.denominator):
        exps[p] = -k
    e = reduce(math.gcd, (abs(k) for k in exps.values()))
    r0 = Fraction(1)
    for p, k in exps.items():
        r0 *= Fraction(p) ** (k // e)
    twisted = False
    if r < 0:
        if e % 2:
            r0 = -r0
        else:
            twisted = True
    h = e // (e & -e) if twisted else e
    return RadicalDecomposition(r, r0, e, twisted, h)


def power_index_bruteforce(r, kmax: int) -> int:
    """Largest k <= kmax with r a k-th power in Q^*, by direct root extraction."""
    r = Fraction(r)
    return max(k for k in range(1, kmax + 1) if rational_root(r, k) is not None)


def entanglement(dec: RadicalDecomposition) -> EntanglementData:
    d = disc_sqrt(dec.r0)
    d2 = 2 ** ord_p(d, 2)
    odd = tuple(p for p in prime_divisors(d) if p != 2)
    e2 = dec.e & -dec.e
    return EntanglementData(d, d2, odd, e2, disc_sqrt(dec.r))


def is_pth_power(dec: RadicalDecomposition, p: int) -> bool:
    return dec.h % p == 0


def local_degree(dec: RadicalDecomposition, p: int) -> int:
    """[F_p : Q] for F_p = Q(zeta_p, r^(1/p))."""
    return p - 1 if dec.h % p == 0 else p * (p - 1)
