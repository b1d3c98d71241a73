"""Problem descriptions, exact density values and Artin's constant."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Tuple

import mpmath
import numpy as np

from .numtheory import small_primes

# vanishing causes
NONE = "none"
NAIVE_MEASURE_ZERO = "naive-measure-zero"
EMPTY_LOCAL_SET = "empty-local-set"
THM_58_A = "thm-5.8-a"
THM_58_B = "thm-5.8-b"
THM_67 = tuple(f"thm-6.7-{c}" for c in "abcde")
ORACLE_DETECTED = "oracle-detected"
CAUSES = (NONE, NAIVE_MEASURE_ZERO, EMPTY_LOCAL_SET, THM_58_A, THM_58_B) + THM_67 + (ORACLE_DETECTED,)


class InvalidSpec(ValueError):
    pass


def parse_rational(text) -> Fraction:
    """Parse "p/q" or an integer string (or pass through numbers)."""
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    text = str(text).strip()
    if "." in text or "e" in text.lower():
        raise InvalidSpec(f"not an exact rational: {text!r}")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidSpec(f"cannot parse rational {text!r}") from exc


@dataclass(frozen=True)
class ProblemSpec:
    """Which density: primitive roots, optionally in a progression a mod f,
    optionally of exact index t."""

    r: Fraction
    a: Optional[int] = None
    f: Optional[int] = None
    t: int = 1

    def __post_init__(self):
        r = parse_rational(self.r)
        if r in (0, 1, -1):
            raise InvalidSpec(f"r must differ from 0 and +-1, got {r}")
        object.__setattr__(self, "r", r)
        if (self.a is None) != (self.f is None):
            raise InvalidSpec("a progression needs both a and f")
        if self.f is not None:
            if self.f < 1:
                raise InvalidSpec("f must be positive")
            if math.gcd(self.a, self.f) != 1:
                raise InvalidSpec(f"gcd(a, f) = gcd({self.a}, {self.f}) != 1")
            if self.f == 1:
                object.__setattr__(self, "a", None)
                object.__setattr__(self, "f", None)
            else:
                object.__setattr__(self, "a", self.a % self.f)
        if self.t < 1:
            raise InvalidSpec("t must be a positive integer")

    @property
    def has_progression(self) -> bool:
        return self.f is not None

    @property
    def modulus(self) -> int:
        return self.f or 1

    @property
    def kind(self) -> str:
        if self.has_progression:
            return "combined" if self.t > 1 else "progression"
        return "near" if self.t > 1 else "artin"

    def as_dict(self) -> dict:
        return {"r": str(self.r), "a": self.a, "f": self.f, "t": self.t}


@dataclass(frozen=True)
class VanishingVerdict:
    vanishes: bool
    cause: str = NONE

    def __post_init__(self):
        if self.cause not in CAUSES:
            raise ValueError(f"unknown cause {self.cause!r}")
        if self.vanishes != (self.cause != NONE):
            raise ValueError("vanishes must agree with cause")

    @classmethod
    def of(cls, cause: str) -> "VanishingVerdict":
        return cls(cause != NONE, cause)


def artin_factor(p: int) -> Fraction:
    return 1 - Fraction(1, p * (p - 1))


@dataclass(frozen=True, eq=False)
class ExactDensity:
    """coeff * A / prod_{p excluded} (1 - 1/(p(p-1))), A Artin's constant.

    Two densities compare equal when they denote the same real number, whatever
    set of tail primes each one has absorbed into its coefficient.
    """

    coeff: Fraction
    uses_artin_tail: bool = True
    excluded_tail_primes: Tuple[int, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "coeff", Fraction(self.coeff))
        object.__setattr__(self, "excluded_tail_primes", tuple(sorted(set(self.excluded_tail_primes))))
        if self.coeff < 0:
            raise ValueError(f"negative density coefficient {self.coeff}")

    @classmethod
    def zero(cls) -> "ExactDensity":
        return cls(Fraction(0), False, ())

    @property
    def artin_multiple(self) -> Fraction:
        """The rational c with density = c * A (or the plain value without tail)."""
        if not self.uses_artin_tail:
            return self.coeff
        c = self.coeff
        for p in self.excluded_tail_primes:
            c /= artin_factor(p)
        return c

    def normalized(self) -> "ExactDensity":
        if self.coeff == 0:
            return ExactDensity.zero()
        return ExactDensity(self.artin_multiple, self.uses_artin_tail, ())

    def _key(self):
        if self.coeff == 0:
            return (False, Fraction(0))
        return (self.uses_artin_tail, self.artin_multiple)

    def __eq__(self, other):
        if not isinstance(other, ExactDensity):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __float__(self) -> float:
        if not self.uses_artin_tail:
            return float(self.coeff)
        return float(self.artin_multiple) * artin_constant_float()

    def __repr__(self):
        tail = " * A" if self.uses_artin_tail else ""
        excl = f" / tail{list(self.excluded_tail_primes)}" if self.excluded_tail_primes else ""
        return f"ExactDensity({self.coeff}{tail}{excl})"


# -- Artin's constant --------------------------------------------------------

MAX_DIGITS = 10


@lru_cache(maxsize=None)
def _artin_constant_mp(dps: int) -> mpmath.mpf:
    # log(1 - 1/(p(p-1))) = -sum_{k>=2} (L_k - 1)/(k p^k), L_k the Lucas numbers,
    # because 1 - x - x^2 = (1 - phi x)(1 + x/phi).  Primes up to `cut` are
    # multiplied out directly and the rest enter through prime zeta values.
    cut = 100
    with mpmath.workdps(dps + 10):
        head = mpmath.mpf(1)
        primes = small_primes(cut)
        for p in primes:
            head *= 1 - mpmath.mpf(1) / (p * (p - 1))
        log_tail = mpmath.mpf(0)
        lucas = [2, 1]
        k = 2
        eps = mpmath.mpf(10) ** (-(dps + 8))
        while True:
            lucas.append(lucas[-1] + lucas[-2])
            pz = mpmath.primezeta(k) - mpmath.fsum(mpmath.mpf(p) ** -k for p in primes)
            term = (lucas[k] - 1) * pz / k
            log_tail -= term
            if abs(term) < eps:
                break
            k += 1
        return +(head * mpmath.exp(log_tail))


@lru_cache(maxsize=1)
def artin_constant_float() -> float:
    return float(_artin_constant_mp(30))


def artin_constant(precision_digits: int) -> str:
    """Artin's constant rounded to ``precision_digits`` decimal places."""
    if not 1 <= precision_digits <= MAX_DIGITS:
        raise ValueError(f"precision must be between 1 and {MAX_DIGITS} digits")
    value = _artin_constant_mp(precision_digits + 20)
    # A lies in (0.1, 1), so significant digits are decimal places
    return mpmath.nstr(value, precision_digits, strip_zeros=False)


def artin_constant_bounds(x: int) -> Tuple[float, float]:
    """Rigorous enclosure of Artin's constant from the product over primes <= x.

    The missing factors lie in [1 - tail, 1] with
    tail <= sum_{odd n > x} 1/(n(n-1)) <= 1/(2(x-1)).
    """
    if x < 3:
        raise ValueError("x must be at least 3")
    p = np.asarray(small_primes_np(x), dtype=np.float64)
    logs = np.log1p(-1.0 / (p * (p - 1.0)))
    s = math.fsum(logs.tolist())
    # log1p is accurate to a few ulps per term; 1e-9 dwarfs the accumulated error
    slack = 1e-9
    hi = math.exp(s) * (1 + slack)
    lo = math.exp(s) * (1 - slack) * (1 - 1.0 / (2 * (x - 1)))
    return lo, hi


def small_primes_np(limit: int) -> np.ndarray:
    """Primes <= limit as an int64 array (numpy sieve)."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    sieve[4::2] = False
    for p in range(3, math.isqrt(limit) + 1, 2):
        if sieve[p]:
            sieve[p * p :: 2 * p] = False
    return np.flatnonzero(sieve).astype(np.int64)


def tail_product(excluded: Iterable[int]) -> Fraction:
    """prod over excluded p of (1 - 1/(p(p-1))); dividing A by this gives the tail."""
    out = Fraction(1)
    for p in excluded:
        out *= artin_factor(p)
    return out
