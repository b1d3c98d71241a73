"""Prime sieve statistics: how often r has index t modulo primes q <= bound.

Primes come from a segmented sieve of Eratosthenes.  For each segment the
residues r mod q, the factorizations of q - 1 and the multiplicative orders are
all computed with vectorized int64 arithmetic, which is exact while q < 3e9
(products of two residues stay below 2^63).  Segments are independent and the
reduction is a sum of integer counts, so results do not depend on how the
range is cut up or how many workers run.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Iterator, List, Optional, Tuple

import numpy as np

from .numtheory import factorize, multiplicative_order
from .problem import ProblemSpec, small_primes_np

MAX_BOUND = 10**9
BLOCK = 1 << 12


@dataclass(frozen=True)
class SieveConfig:
    bound: int
    segment_size: int = 1 << 20
    worker_count: int = 1

    def __post_init__(self):
        if not 100 <= self.bound <= MAX_BOUND:
            raise ValueError(f"bound must lie in [100, {MAX_BOUND}]")
        if self.segment_size <= 0 or self.segment_size % BLOCK:
            raise ValueError(f"segment_size must be a positive multiple of {BLOCK}")
        if self.worker_count < 1:
            raise ValueError("worker_count must be positive")

    def segments(self) -> List[Tuple[int, int]]:
        return [(lo, min(lo + self.segment_size, self.bound + 1))
                for lo in range(0, self.bound + 1, self.segment_size)]


def segment_primes(lo: int, hi: int, base: np.ndarray) -> np.ndarray:
    """Primes in [lo, hi) given all primes up to sqrt(hi)."""
    flags = np.ones(hi - lo, dtype=bool)
    flags[: max(0, 2 - lo)] = False
    for p in base.tolist():
        if p * p >= hi:
            break
        start = max(p * p, -(-lo // p) * p)
        flags[start - lo :: p] = False
    return np.flatnonzero(flags).astype(np.int64) + lo


def _base_primes(bound: int) -> np.ndarray:
    return small_primes_np(math.isqrt(bound) + 1)


def iterate_primes(config: SieveConfig) -> Iterator[int]:
    base = _base_primes(config.bound)
    for lo, hi in config.segments():
        yield from segment_primes(lo, hi, base).tolist()


# -- residues and orders -------------------------------------------------------

def _mulmod(a: np.ndarray, b: np.ndarray, m: np.ndarray) -> np.ndarray:
    return (a * b) % m


def _powmod(base: np.ndarray, exp: np.ndarray, mod: np.ndarray) -> np.ndarray:
    result = np.ones_like(base) % mod
    base = base % mod
    exp = exp.copy()
    while np.any(exp):
        odd = (exp & 1).astype(bool)
        result = np.where(odd, _mulmod(result, base, mod), result)
        base = _mulmod(base, base, mod)
        exp >>= 1
    return result


def _int_mod(n: int, q: np.ndarray) -> np.ndarray:
    """n mod q for an arbitrary-size non-negative integer n."""
    if n < 1 << 62:
        return np.int64(n) % q
    out = np.zeros_like(q)
    digits = []
    while n:
        digits.append(n & 0xFFFFF)
        n >>= 20
    for d in reversed(digits):
        out = (out * (1 << 20) + d) % q
    return out


def indices(r: Fraction, q: np.ndarray, base: np.ndarray) -> np.ndarray:
    """(q - 1) / ord_q(r) for each prime q; 0 where q divides num or den of r."""
    r = Fraction(r)
    num = _int_mod(abs(r.numerator), q)
    if r.numerator < 0:
        num = (q - num) % q
    den = _int_mod(r.denominator, q)
    skip = (num == 0) | (den == 0)
    qs = np.where(skip, 3, q)  # harmless modulus for skipped entries
    x = _mulmod(np.where(skip, 1, num), _powmod(np.where(skip, 1, den), qs - 2, qs), qs)
    order = qs - 1
    cof = qs - 1
    for p in base.tolist():
        hit = np.flatnonzero(cof % p == 0)
        if hit.size == 0:
            if p * p > int(qs.max()):
                break
            continue
        while True:
            sub = hit[cof[hit] % p == 0]
            if sub.size == 0:
                break
            cof[sub] //= p
        _strip(order, x, qs, hit, p)
    big = np.flatnonzero(cof > 1)
    if big.size:
        # what survives trial division by primes <= sqrt(q) is a single prime
        _strip(order, x, qs, big, cof[big])
    out = (qs - 1) // order
    out[skip] = 0
    return out


def _strip(order, x, q, idx, p) -> None:
    """Remove factors p from order[idx] while x^(order/p) = 1."""
    p = np.broadcast_to(np.asarray(p, dtype=np.int64), idx.shape).copy()
    while idx.size:
        divisible = order[idx] % p == 0
        idx, p = idx[divisible], p[divisible]
        if idx.size == 0:
            break
        cand = order[idx] // p
        ok = _powmod(x[idx], cand, q[idx]) == 1
        order[idx[ok]] = cand[ok]
        idx, p = idx[ok], p[ok]


def index_of(r, q: int) -> Optional[int]:
    """(q - 1) / ord_q(r), or None when q divides the numerator or denominator."""
    r = Fraction(r)
    if r.numerator % q == 0 or r.denominator % q == 0:
        return None
    x = r.numerator * pow(r.denominator, -1, q) % q
    return (q - 1) // multiplicative_order(x, q, factorize(q - 1))


# -- experiments ---------------------------------------------------------------

@dataclass(frozen=True)
class EmpiricalReport:
    spec: ProblemSpec
    bound: int
    primes_considered: int
    matching: int
    excluded: int
    observed: float
    predicted: float
    deviation: float
    binomial_se: float

    @property
    def z_score(self) -> float:
        if self.binomial_se:
            return self.deviation / self.binomial_se
        return 0.0 if self.deviation == 0 else math.inf

    def as_dict(self) -> dict:
        d = asdict(self)
        d["spec"] = self.spec.as_dict()
        return d


def _count_segment(args) -> Tuple[int, int, int]:
    lo, hi, bound, r, a, f, t = args
    base = _base_primes(bound)
    q = segment_primes(lo, hi, base)
    if q.size == 0:
        return 0, 0, 0
    idx = indices(r, q, base)
    drop = (idx == 0) | (q <= f)
    considered = int(np.count_nonzero(~drop))
    hit = ~drop & (idx == t)
    if f > 1:
        hit &= q % f == a
    return considered, int(np.count_nonzero(hit)), int(np.count_nonzero(drop))


def count_matches(spec: ProblemSpec, config: SieveConfig) -> Tuple[int, int, int]:
    """(primes considered, primes matching, primes excluded) up to the bound."""
    jobs = [(lo, hi, config.bound, spec.r, spec.a or 0, spec.modulus, spec.t)
            for lo, hi in config.segments()]
    if config.worker_count == 1:
        parts = [_count_segment(job) for job in jobs]
    else:
        with ProcessPoolExecutor(config.worker_count) as pool:
            parts = list(pool.map(_count_segment, jobs))
    return tuple(sum(col) for col in zip(*parts))


def run_experiment(spec: ProblemSpec, config: SieveConfig, predicted: Optional[float] = None) -> EmpiricalReport:
    if predicted is None:
        from .densities import generic_density

        predicted = float(generic_density(spec)[0])
    considered, matching, excluded = count_matches(spec, config)
    observed = matching / considered if considered else 0.0
    se = math.sqrt(max(predicted * (1 - predicted), 0.0) / considered) if considered else math.inf
    return EmpiricalReport(spec, config.bound, considered, matching, excluded,
                           observed, predicted, observed - predicted, se)
