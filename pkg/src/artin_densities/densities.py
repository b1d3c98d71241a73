"""Closed-form primitive root densities as exact rational multiples of A.

Every function returns an :class:`ExactDensity` together with a
:class:`VanishingVerdict`.  The vanishing classifiers are written from the
case lists, independently of the arithmetic that produces the coefficient, so
the two can be checked against each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from .numtheory import (
    disc_sqrt,
    euler_phi,
    kronecker,
    ord_p,
    prime_divisors,
    rational_root,
    small_primes,
)
from .problem import (
    EMPTY_LOCAL_SET,
    NAIVE_MEASURE_ZERO,
    NONE,
    THM_58_A,
    THM_58_B,
    THM_67,
    ExactDensity,
    InvalidSpec,
    ProblemSpec,
    VanishingVerdict,
    artin_constant,
)
from .radical import RadicalDecomposition, decompose, entanglement, local_degree

__all__ = [
    "ExactDensity",
    "ProblemSpec",
    "VanishingVerdict",
    "artin_constant",
    "artin_density",
    "ap_naive_measure",
    "ap_density",
    "near_naive_measure",
    "near_density",
    "inclusion_exclusion_density",
    "generic_density",
    "closed_form",
]


def _local_artin(dec: RadicalDecomposition, p: int) -> Fraction:
    return 1 - Fraction(1, local_degree(dec, p))


def _naive(dec: RadicalDecomposition, special: dict) -> ExactDensity:
    """prod over p in `special` of the given local factors, Artin factors elsewhere.

    Primes dividing h carry a non-generic Artin factor and are always listed.
    """
    factors = dict(special)
    for p in prime_divisors(dec.h):
        factors.setdefault(p, _local_artin(dec, p))
    coeff = Fraction(1)
    for value in factors.values():
        coeff *= value
    if coeff == 0:
        return ExactDensity.zero()
    return ExactDensity(coeff, True, tuple(factors))


def _scaled(E: Fraction, naive: ExactDensity) -> ExactDensity:
    if E == 0 or naive.coeff == 0:
        return ExactDensity.zero()
    return ExactDensity(E * naive.coeff, True, naive.excluded_tail_primes)


def _is_square(x: Fraction) -> bool:
    return rational_root(Fraction(x), 2) is not None


# -- Artin's original problem --------------------------------------------------

def artin_naive(r) -> ExactDensity:
    dec = decompose(r)
    return _naive(dec, {2: _local_artin(dec, 2)})


def artin_correction(r) -> Fraction:
    dec = decompose(r)
    D = disc_sqrt(dec.r)
    if D % 2 == 0:
        return Fraction(1)
    prod = Fraction(1)
    for p in prime_divisors(D):
        prod *= Fraction(-1, local_degree(dec, p) - 1)
    return 1 - prod


def artin_density(r) -> Tuple[ExactDensity, VanishingVerdict]:
    dec = decompose(r)
    if _is_square(dec.r):
        return ExactDensity.zero(), VanishingVerdict.of(NAIVE_MEASURE_ZERO)
    return _scaled(artin_correction(r), artin_naive(r)), VanishingVerdict.of(NONE)


# -- primes in a progression ---------------------------------------------------

def _progression(a: int, f: int) -> Tuple[int, int]:
    if f < 1 or math.gcd(a, f) != 1:
        raise InvalidSpec(f"need gcd(a, f) = 1 and f >= 1, got a={a}, f={f}")
    return a % f, f


def _ap_formula(dec: RadicalDecomposition, a: int, f: int) -> ExactDensity:
    # 1/phi(f) * prod_{p | gcd(a-1, f)} (1 - 1/p) * prod_{p not | f} Artin factor
    special = {}
    g = math.gcd(a - 1, f)
    for p in prime_divisors(f):
        special[p] = Fraction(1, euler_phi(p ** ord_p(f, p)))
        if g % p == 0:
            special[p] *= 1 - Fraction(1, p)
    special.setdefault(2, _local_artin(dec, 2))
    return _naive(dec, special)


def _ap_empty(dec: RadicalDecomposition, a: int, f: int) -> bool:
    g = math.gcd(a - 1, f)
    if any(dec.h % p == 0 for p in prime_divisors(g)):
        return True
    return dec.twisted and f % 4 == 0 and a % 4 == 1


def ap_naive_measure(r, a: int, f: int) -> Tuple[ExactDensity, bool]:
    """Measure of the primitive-root set restricted to q = a mod f, and emptiness."""
    a, f = _progression(a, f)
    dec = decompose(r)
    if _is_square(dec.r) and f % 2 == 1:
        return ExactDensity.zero(), True
    if _ap_empty(dec, a, f):
        return ExactDensity.zero(), True
    naive = _ap_formula(dec, a, f)
    if dec.twisted and f % 4 == 0:
        naive = ExactDensity(2 * naive.coeff, True, naive.excluded_tail_primes)
    return naive, naive.coeff == 0


def _chi_2_component(D: int, a: int) -> int:
    """2-part of the Kronecker character of discriminant D, evaluated at odd a."""
    rest = D
    for p in prime_divisors(D):
        if p != 2:
            rest //= p if p % 4 == 1 else -p
    return kronecker(rest, a)


def ap_correction(r, a: int, f: int) -> Fraction:
    dec = decompose(r)
    D = disc_sqrt(dec.r)
    E2 = -_chi_2_component(D, a) if ord_p(D, 2) <= ord_p(f, 2) else 0
    prod = Fraction(E2)
    for p in prime_divisors(D):
        if p == 2:
            continue
        if f % p == 0:
            prod *= kronecker(a, p)
        else:
            prod *= Fraction(-1, local_degree(dec, p) - 1)
    return 1 + prod


def classify_ap(r, a: int, f: int) -> str:
    """Which vanishing case of the progression problem applies, or NONE."""
    D = disc_sqrt(r)
    if f % D == 0 and kronecker(D, a) == 1:
        return THM_58_A
    if rational_root(Fraction(r), 3) is not None and f % D != 0 and (3 * f) % D == 0:
        if kronecker(disc_sqrt(-3 * Fraction(r)), a) == -1:
            return THM_58_B
    return NONE


def ap_density(r, a: int, f: int) -> Tuple[ExactDensity, VanishingVerdict]:
    a, f = _progression(a, f)
    if f == 1:
        return artin_density(r)
    dec = decompose(r)
    if _is_square(dec.r):
        return ExactDensity.zero(), VanishingVerdict.of(NAIVE_MEASURE_ZERO)
    if any(dec.h % p == 0 for p in prime_divisors(math.gcd(a - 1, f))):
        return ExactDensity.zero(), VanishingVerdict.of(EMPTY_LOCAL_SET)
    E = ap_correction(r, a, f)
    return _scaled(E, _ap_formula(dec, a, f)), VanishingVerdict.of(classify_ap(dec.r, a, f))


# -- near-primitive roots ------------------------------------------------------

def _alpha2(dec: RadicalDecomposition, t: int) -> Fraction:
    k, j = ord_p(t, 2), ord_p(dec.e, 2)
    if dec.twisted and 0 < k <= j - 1:
        return Fraction(1, 2)
    if dec.twisted and 0 < k == j:
        return Fraction(1, 3)
    return Fraction(1)


def near_naive_measure(r, t: int) -> ExactDensity:
    if t < 1:
        raise InvalidSpec("t must be positive")
    dec = decompose(r)
    special = {}
    for p in prime_divisors(t):
        tp = p ** ord_p(t, p)
        special[p] = Fraction(math.gcd(tp, dec.e), tp * tp)
        if ord_p(dec.e, p) <= ord_p(t, p):
            special[p] *= 1 + Fraction(1, p)
    special.setdefault(2, _local_artin(dec, 2))
    special[2] *= _alpha2(dec, t)
    return _naive(dec, special)


def s2_value(dec: RadicalDecomposition) -> int:
    ent = entanglement(dec)
    if not dec.twisted:
        return math.lcm(2 * ent.e2, ent.d2)
    if (ent.e2, ent.d2) == (2, 8):
        return 4
    return 4 * ent.e2


def near_E2(dec: RadicalDecomposition, t: int) -> Fraction:
    ent = entanglement(dec)
    s2 = s2_value(dec)
    t2 = 2 ** ord_p(t, 2)
    if t2 % s2 == 0:
        return Fraction(1)
    if (2 * t2) % s2 != 0:
        return Fraction(0)
    if s2 == 2 * t2 == 2:
        return Fraction(-1)
    if s2 == 2 * t2 == 4 and dec.twisted and (ent.e2, ent.d2) == (2, 8):
        return Fraction(-1)
    return Fraction(-1, 3)


def near_correction(r, t: int) -> Fraction:
    dec = decompose(r)
    ent = entanglement(dec)
    prod = near_E2(dec, t)
    for p in ent.odd_critical_primes:
        if t % p:
            prod *= Fraction(-1, local_degree(dec, p) - 1)
    return 1 + prod


def classify_near(r, t: int) -> str:
    """Vanishing case (a)-(e) for index t, with (e) restricted to t = 4 mod 8."""
    r = Fraction(r)
    dec = decompose(r)
    cube = rational_root(r, 3) is not None
    minus_r_square = _is_square(-r)
    if t % 2 == 1 and t % disc_sqrt(r) == 0:
        return THM_67[0]
    if t % 4 == 2 and minus_r_square:
        u = rational_root(-r, 2)
        if (2 * t) % disc_sqrt(2 * u) == 0:
            return THM_67[1]
    if cube and t % 3 and t % disc_sqrt(-3 * dec.r0) == 0:
        if not minus_r_square and ord_p(t, 2) > ord_p(dec.e, 2):
            return THM_67[2]
        if minus_r_square and ord_p(t, 2) > ord_p(dec.e, 2) + 1:
            return THM_67[3]
    if cube and t % 3 and minus_r_square and t % 8 == 4:
        u = rational_root(-r, 2)
        dl = disc_sqrt(-3 * u)
        if dl % 8 == 0 and (2 * t) % dl == 0:
            return THM_67[4]
    return NONE


def near_density(r, t: int) -> Tuple[ExactDensity, VanishingVerdict]:
    naive = near_naive_measure(r, t)
    return _scaled(near_correction(r, t), naive), VanishingVerdict.of(classify_near(r, t))


# -- inclusion-exclusion series ------------------------------------------------

@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi


def _reciprocal_sum_constant() -> Fraction:
    """Rational upper bound for prod_p (1 + 1/(p(p-1))) = sum_n mu^2(n)/(n phi(n))."""
    bound = 10_000
    prod = 1.0
    for p in small_primes(bound):
        prod *= 1 + 1 / (p * (p - 1))
    # remaining factors: prod_{p > B} (1 + x_p) <= exp(1/B) <= 1 + 2/B
    return Fraction(prod) * (1 + Fraction(2, bound)) * (1 + Fraction(1, 10**9))


def inclusion_exclusion_density(r, cutoff: int) -> Interval:
    """Enclosure of sum_n mu(n)/[F_n:Q] from the terms n <= cutoff.

    For squarefree n, [F_n:Q] = n phi(n)/gcd(n, h), halved when F_2 has odd
    discriminant D and 2D | n.  The tail is bounded using
    sum_{n > x} 1/(n phi(n)) <= 2C/x, C = sum mu^2(n)/(n phi(n)).
    """
    if cutoff < 1:
        raise ValueError("cutoff must be positive")
    dec = decompose(r)
    if _is_square(dec.r):
        raise InvalidSpec("the inclusion-exclusion series is for non-square r")
    D = disc_sqrt(dec.r)
    halve = D % 2 != 0
    mu = _mobius_table(cutoff)
    phi = _phi_table(cutoff)
    terms = []
    for n in range(1, cutoff + 1):
        if mu[n] == 0:
            continue
        deg = n * phi[n] // math.gcd(n, dec.h)
        if halve and n % (2 * abs(D)) == 0:
            deg //= 2
        terms.append((mu[n], deg))
    L = 1
    for _, deg in terms:
        L = L * deg // math.gcd(L, deg)
    partial = Fraction(sum(m * (L // deg) for m, deg in terms), L)
    C = _reciprocal_sum_constant()
    tail = dec.h * 2 * C / cutoff
    if halve:
        # the doubled terms 2D | n contribute at most 2C/(phi(2|D|) x) extra
        tail += dec.h * 2 * C / (euler_phi(2 * abs(D)) * cutoff)
    return Interval(partial - tail, partial + tail)


def _mobius_table(n: int) -> List[int]:
    mu = [1] * (n + 1)
    is_comp = bytearray(n + 1)
    for p in range(2, n + 1):
        if not is_comp[p]:
            for m in range(p, n + 1, p):
                if m > p:
                    is_comp[m] = 1
                mu[m] = -mu[m]
            for m in range(p * p, n + 1, p * p):
                mu[m] = 0
    return mu


def _phi_table(n: int) -> List[int]:
    phi = list(range(n + 1))
    for p in range(2, n + 1):
        if phi[p] == p:
            for m in range(p, n + 1, p):
                phi[m] -= phi[m] // p
    return phi


# -- dispatch ------------------------------------------------------------------

def closed_form(spec: ProblemSpec) -> Optional[Tuple[ExactDensity, VanishingVerdict]]:
    """Closed-form density for this problem kind; None for the combined problem."""
    kind = spec.kind
    if kind == "artin":
        return artin_density(spec.r)
    if kind == "progression":
        return ap_density(spec.r, spec.a, spec.f)
    if kind == "near":
        return near_density(spec.r, spec.t)
    return None


def generic_density(spec: ProblemSpec, **engine_options) -> Tuple[ExactDensity, VanishingVerdict]:
    """Density from local measures and character averages at the critical primes."""
    from .finite_model import evaluate

    if spec.kind == "combined" and spec.f % spec.t == 0 and spec.a % spec.t != 1 % spec.t:
        return ExactDensity.zero(), VanishingVerdict.of(EMPTY_LOCAL_SET)
    res = evaluate(spec, **engine_options)
    return res.density, res.verdict
