"""Exact integer and rational primitives.

Factorization is trial division by a cached table of small primes, followed by
deterministic Miller-Rabin and Pollard rho for whatever cofactor remains.
Rationals are plain :class:`fractions.Fraction` values throughout the package.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Tuple

Factorization = Tuple[Tuple[int, int], ...]

_TRIAL_BOUND = 1 << 20

# (bound, witnesses): the witness set is deterministic for every n < bound.
_MR_WITNESSES = (
    (2047, (2,)),
    (1373653, (2, 3)),
    (25326001, (2, 3, 5)),
    (3215031751, (2, 3, 5, 7)),
    (2152302898747, (2, 3, 5, 7, 11)),
    (3474749660383, (2, 3, 5, 7, 11, 13)),
    (341550071728321, (2, 3, 5, 7, 11, 13, 17)),
    (3825123056546413051, (2, 3, 5, 7, 11, 13, 17, 19, 23)),
    (318665857834031151167461, (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)),
    (3317044064679887385961981, (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)),
)


def small_primes(limit: int) -> List[int]:
    """Primes <= limit by a plain sieve of Eratosthenes."""
    if limit < 2:
        return []
    sieve = bytearray([1]) * (limit + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(range(p * p, limit + 1, p)))
    return [i for i, flag in enumerate(sieve) if flag]


@lru_cache(maxsize=1)
def _trial_primes() -> Tuple[int, ...]:
    return tuple(small_primes(_TRIAL_BOUND))


def is_prime(n: int) -> bool:
    """Deterministic primality test for n below 3.3e24.

    Raises ValueError beyond that range rather than answering probabilistically.
    """
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41):
        if n % p == 0:
            return n == p
    for bound, witnesses in _MR_WITNESSES:
        if n < bound:
            break
    else:
        raise ValueError(f"{n} exceeds the deterministic Miller-Rabin range")
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in witnesses:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    # Brent's variant; n is odd, composite and has no factor below _TRIAL_BOUND.
    for c in range(1, 200):
        y, r, q, g = 2, 1, 1, 1
        x = ys = 2
        m = 128
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"Pollard rho failed on {n}")


def _split(n: int, out: Dict[int, int]) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    g = _pollard_rho(n)
    _split(g, out)
    _split(n // g, out)


def factorize(n: int) -> Factorization:
    """Prime factorization of n >= 1 as a sorted tuple of (prime, exponent)."""
    if n < 1:
        raise ValueError("factorize expects a positive integer")
    out: Dict[int, int] = {}
    for p in _trial_primes():
        if p * p > n:
            break
        if n % p == 0:
            k = 0
            while n % p == 0:
                n //= p
                k += 1
            out[p] = k
    else:
        # every trial prime was too small to finish the job
        if n > 1:
            _split(n, out)
            n = 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return tuple(sorted(out.items()))


def prime_divisors(n: int) -> List[int]:
    return [p for p, _ in factorize(abs(n))] if n else []


def ord_p(n: int, p: int) -> int:
    """p-adic valuation of a non-zero integer or rational."""
    if n == 0:
        raise ValueError("valuation of zero")
    if isinstance(n, Fraction):
        return ord_p(n.numerator, p) - ord_p(n.denominator, p)
    n = abs(n)
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def p_part(n: int, p: int) -> int:
    """The largest power of p dividing n (n != 0)."""
    return p ** ord_p(n, p)


def mobius(n: int) -> int:
    fac = factorize(n)
    if any(k > 1 for _, k in fac):
        return 0
    return -1 if len(fac) % 2 else 1


def euler_phi(n: int) -> int:
    result = 1
    for p, k in factorize(n):
        result *= (p - 1) * p ** (k - 1)
    return result


def squarefree_kernel(n: int) -> int:
    """Squarefree part of n carrying the sign of n: n = kernel * square."""
    if n == 0:
        raise ValueError("squarefree kernel of zero")
    s = -1 if n < 0 else 1
    for p, k in factorize(abs(n)):
        if k % 2:
            s *= p
    return s


def kronecker(d: int, n: int) -> int:
    """Kronecker symbol (d | n)."""
    if n == 0:
        return 1 if d in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if d < 0:
            result = -result
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if d % 2 == 0:
            return 0
        if v % 2 and d % 8 in (3, 5):
            result = -result
    # Jacobi symbol (d | n) for odd positive n
    a = d % n if n > 1 else 0
    if n == 1:
        return result
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def disc_sqrt(x) -> int:
    """Discriminant of Q(sqrt(x)) for non-zero rational x; 1 when x is a square."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("disc_sqrt is undefined at 0")
    s = squarefree_kernel(x.numerator * x.denominator)
    if s == 1:
        return 1
    return s if s % 4 == 1 else 4 * s


def multiplicative_order(x: int, q: int, factored_order_bound: Iterable[Tuple[int, int]] | None = None) -> int:
    """Order of x in (Z/q)^* for prime q, descending from q - 1."""
    x %= q
    if x == 0:
        raise ValueError(f"{x} is not a unit modulo {q}")
    n = q - 1
    fac = factorize(n) if factored_order_bound is None else factored_order_bound
    order = n
    for p, k in fac:
        for _ in range(k):
            if pow(x, order // p, q) == 1:
                order //= p
            else:
                break
    return order


def rational_root(x: Fraction, k: int) -> Fraction | None:
    """Exact k-th root of a rational in Q, or None if x is not a k-th power."""
    x = Fraction(x)
    if x < 0:
        if k % 2 == 0:
            return None
        root = rational_root(-x, k)
        return None if root is None else -root
    roots = []
    for part in (x.numerator, x.denominator):
        r = _integer_root(part, k)
        if r is None:
            return None
        roots.append(r)
    return Fraction(roots[0], roots[1])


def _integer_root(n: int, k: int) -> int | None:
    if n < 2:
        return n
    # integer Newton from an overestimate; the iterates decrease to floor(n^(1/k))
    r = 1 << -(-n.bit_length() // k)
    while True:
        nxt = ((k - 1) * r + n // r ** (k - 1)) // k
        if nxt >= r:
            break
        r = nxt
    return r if r**k == n else None
