"""Finite-level model of the radical automorphism group A = mu_hat x| Z_hat^*.

At level N an automorphism is a pair (v, u) with v mod N and u a unit mod N:
u is the cyclotomic exponent (zeta -> zeta^u) and v the Kummer part,
r0^(1/N) -> zeta_N^v * r0^(1/N).  Composition is the affine law
(v1, u1)(v2, u2) = (v1 + u1 v2, u1 u2).  By CRT the level group is the product
of its p-components (v, u) mod N_p, which is how local sets, measures and
character averages are enumerated.

Everything here is brute force on purpose: it is the independent check for
the closed forms in :mod:`artin_densities.densities`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, Iterator, List, Optional, Tuple

import numpy as np

from .numtheory import euler_phi, factorize, kronecker, p_part, prime_divisors
from .problem import (
    EMPTY_LOCAL_SET,
    NONE,
    ORACLE_DETECTED,
    ExactDensity,
    ProblemSpec,
    VanishingVerdict,
)
from .radical import EntanglementData, RadicalDecomposition, decompose, entanglement

DEFAULT_BUDGET = 4_000_000
WHOLE_GROUP_BUDGET = 2_000_000


class LevelBudgetExceeded(RuntimeError):
    pass


class LevelNotStable(RuntimeError):
    pass


class ConsistencyError(AssertionError):
    pass


@dataclass(frozen=True)
class AffineElement:
    v: int
    u: int


def _negative(dec: RadicalDecomposition) -> bool:
    # r = -r0^e; true in the twisted case, or for a sign-flipped r0 with e odd
    return dec.r != dec.r0**dec.e


@dataclass(frozen=True)
class LevelGroup:
    N: int
    dec: RadicalDecomposition
    ent: EntanglementData = field(default=None)

    def __post_init__(self):
        if self.ent is None:
            object.__setattr__(self, "ent", entanglement(self.dec))
        if self.N % 2:
            raise ValueError("the level must be even")
        if self.N % abs(self.ent.d):
            raise ValueError(f"|d| = {abs(self.ent.d)} does not divide the level {self.N}")

    @property
    def order(self) -> int:
        return self.N * euler_phi(self.N)

    @property
    def primes(self) -> List[int]:
        return prime_divisors(self.N)

    def local_level(self, p: int) -> int:
        return p_part(self.N, p)

    def units(self) -> List[int]:
        return [u for u in range(1, self.N) if math.gcd(u, self.N) == 1]

    def elements(self) -> Iterator[AffineElement]:
        units = self.units()
        for v in range(self.N):
            for u in units:
                yield AffineElement(v, u)

    def identity(self) -> AffineElement:
        return AffineElement(0, 1 % self.N)

    def mul(self, g: AffineElement, h: AffineElement) -> AffineElement:
        return AffineElement((g.v + g.u * h.v) % self.N, g.u * h.u % self.N)

    def inverse(self, g: AffineElement) -> AffineElement:
        w = pow(g.u, -1, self.N)
        return AffineElement(-w * g.v % self.N, w)

    def component(self, g: AffineElement, p: int) -> AffineElement:
        M = self.local_level(p)
        return AffineElement(g.v % M, g.u % M)


@dataclass(frozen=True)
class LocalSetSpec:
    """Condition at p: kernel of restriction to R_{t_p} minus kernel at R_{p t_p},
    intersected with u = a mod f_p when f_p > 1.  t_p = 1 is the primitive-root set."""

    p: int
    t_p: int = 1
    a: Optional[int] = None
    f_p: int = 1

    def __post_init__(self):
        for n in (self.t_p, self.f_p):
            if n != p_part(n, self.p):
                raise ValueError(f"{n} is not a power of {self.p}")
        if self.f_p > 1 and self.a is None:
            raise ValueError("a congruence needs a residue a")


# -- kernels of restriction maps ---------------------------------------------

def _ker(v, u, P: int, e: int, negative: bool):
    """Membership in ker(phi_P) for scalars or broadcastable arrays."""
    if P == 1:
        return np.ones(np.broadcast(v, u).shape, dtype=bool) if isinstance(v, np.ndarray) else True
    if negative and P % 2 == 0:
        # R_P is generated by zeta_{2P} r0^(e/P) and mu_P
        return (u % P == 1) & ((u - 1 + 2 * v * e) % (2 * P) == 0)
    return (u % P == 1) & ((v * e) % P == 0)


def _check_prime_power(P: int) -> int:
    fac = factorize(P)
    if len(fac) != 1:
        raise ValueError(f"{P} is not a prime power > 1")
    return fac[0][0]


def _check_ker_level(P: int, M: int, dec: RadicalDecomposition) -> None:
    need = 2 * P if (_negative(dec) and P % 2 == 0) else P
    if M % need:
        raise ValueError(f"level {M} is too small to test the kernel at {P}")


def in_ker_phi(elem: AffineElement, P: int, lg: LevelGroup) -> bool:
    """Whether elem acts trivially on R_P, the P-th roots of <r>."""
    if P == 1:
        return True
    _check_prime_power(P)
    _check_ker_level(P, lg.N, lg.dec)
    return bool(_ker(elem.v, elem.u, P, lg.dec.e, _negative(lg.dec)))


def card_A_formula(P: int, dec: RadicalDecomposition) -> int:
    if P == 1:
        return 1
    p = _check_prime_power(P)
    phi = euler_phi(P)
    if dec.twisted and p == 2 and dec.e % P == 0:
        return 2 * phi
    return phi * P // math.gcd(P, dec.e)


def card_A_enumerated(P: int, dec: RadicalDecomposition) -> int:
    """#A(P) as |level group| / |kernel of restriction to R_P| at level p*P."""
    if P == 1:
        return 1
    p = _check_prime_power(P)
    M = p * P
    V, U = _grid(M, p)
    kernel = int(np.count_nonzero(_ker(V, U, P, dec.e, _negative(dec))))
    total = M * euler_phi(M)
    if total % kernel:
        raise ConsistencyError("kernel size does not divide the group order")
    return total // kernel


def card_A(P: int, dec: RadicalDecomposition) -> int:
    """Order of A(P) = Aut(R_P) over R_P cap Q^*, by formula and by enumeration."""
    formula = card_A_formula(P, dec)
    counted = card_A_enumerated(P, dec)
    if formula != counted:
        raise ConsistencyError(f"#A({P}) for r={dec.r}: formula {formula}, enumeration {counted}")
    return formula


# -- characters ----------------------------------------------------------------

def psi_K(elem: AffineElement, lg: LevelGroup) -> int:
    """Action on r0^(1/2): r0^(1/2) -> (-1)^v r0^(1/2)."""
    return -1 if elem.v % 2 else 1


def chi_K(elem: AffineElement, lg: LevelGroup) -> int:
    return kronecker(lg.ent.d, elem.u)


def _prime_discriminants(d: int) -> Dict[int, int]:
    """Split a fundamental discriminant into prime discriminants p* (and the 2-part)."""
    out = {}
    rest = d
    for p in prime_divisors(d):
        if p == 2:
            continue
        pstar = p if p % 4 == 1 else -p
        out[p] = pstar
        rest //= pstar
    if rest != 1:
        out[2] = rest
    return out


def chi_K_p(elem: AffineElement, p: int, lg: LevelGroup) -> int:
    """The p-power-conductor component of chi_K."""
    pd = _prime_discriminants(lg.ent.d).get(p)
    return 1 if pd is None else kronecker(pd, elem.u)


def _local_char_table(p: int, d: int, U: np.ndarray) -> np.ndarray:
    pd = _prime_discriminants(d).get(p)
    if pd is None:
        return np.ones(U.shape, dtype=np.int64)
    return np.array([kronecker(pd, int(u)) for u in U.ravel()], dtype=np.int64).reshape(U.shape)


def chi_p(elem: AffineElement, p: int, lg: LevelGroup) -> int:
    """Local factor of psi_K * chi_K: psi_K * chi_{K,2} at 2, chi_{K,p} elsewhere."""
    c = chi_K_p(elem, p, lg)
    return c * psi_K(elem, lg) if p == 2 else c


@dataclass(frozen=True)
class KernelInfo:
    predicate: Callable[[AffineElement], bool]
    size: int
    order: int
    method: str


def galois_kernel(lg: LevelGroup, budget: int = WHOLE_GROUP_BUDGET) -> KernelInfo:
    """The image of the Galois group: kernel of psi_K * chi_K at level N."""

    def predicate(g: AffineElement) -> bool:
        return psi_K(g, lg) * chi_K(g, lg) == 1

    order = lg.order
    if order <= budget:
        V, U = _grid(lg.N)
        chi = _whole_character(V, U, lg)
        return KernelInfo(predicate, int(np.count_nonzero(chi == 1)), order, "enumeration")
    # product structure: sum over A of chi = prod_p (sum over A_p of chi_p)
    charsum = 1
    for p in lg.primes:
        M = lg.local_level(p)
        V, U = _grid(M, p)
        charsum *= int(_local_character(V, U, p, lg).sum())
    return KernelInfo(predicate, (order + charsum) // 2, order, "character-sum")


# -- enumeration helpers -------------------------------------------------------

@lru_cache(maxsize=512)
def _units(M: int) -> np.ndarray:
    return np.array([u for u in range(1, M + 1) if math.gcd(u, M) == 1], dtype=np.int64)


def _grid(M: int, p: Optional[int] = None, vs: Optional[np.ndarray] = None):
    V = np.arange(M, dtype=np.int64) if vs is None else vs
    return V[:, None], _units(M)[None, :]


def _local_character(V, U, p: int, lg: LevelGroup) -> np.ndarray:
    table = _local_char_table(p, lg.ent.d, U)
    if p == 2:
        return np.where(V % 2 == 1, -table, table)
    return np.broadcast_to(table, np.broadcast(V, U).shape)


def _whole_character(V, U, lg: LevelGroup) -> np.ndarray:
    table = np.array([kronecker(lg.ent.d, int(u)) for u in U.ravel()], dtype=np.int64).reshape(U.shape)
    return np.where(V % 2 == 1, -table, table)


def _local_mask(V, U, S: LocalSetSpec, dec: RadicalDecomposition):
    neg = _negative(dec)
    mask = _ker(V, U, S.t_p, dec.e, neg) & ~_ker(V, U, S.p * S.t_p, dec.e, neg)
    if S.f_p > 1:
        mask = mask & (U % S.f_p == S.a % S.f_p)
    return mask


@dataclass(frozen=True)
class LocalResult:
    """nu_p(S_p) and the average E_p of chi_p over S_p (None when S_p is empty)."""

    p: int
    nu: Fraction
    E: Optional[Fraction]
    count: int
    charsum: int
    level: int

    @property
    def empty(self) -> bool:
        return self.count == 0


def _local_counts(S: LocalSetSpec, lg: LevelGroup, M: int, chunks: int) -> Tuple[int, int]:
    _check_ker_level(S.p * S.t_p, M, lg.dec)
    if M % S.f_p:
        raise ValueError(f"level {M} does not see the congruence modulo {S.f_p}")
    count = charsum = 0
    # disjoint ranges of v; the sums are exact integers so the split is invisible
    for vs in np.array_split(np.arange(M, dtype=np.int64), max(1, min(chunks, M))):
        if vs.size == 0:
            continue
        V, U = _grid(M, S.p, vs)
        mask = _local_mask(V, U, S, lg.dec)
        chi = _local_character(V, U, S.p, lg)
        count += int(np.count_nonzero(mask))
        charsum += int(chi[mask].sum())
    return count, charsum


def local_measure_and_average(p: int, S: LocalSetSpec, lg: LevelGroup, chunks: int = 1,
                              level: Optional[int] = None) -> LocalResult:
    M = level or lg.local_level(p)
    if S.p != p:
        raise ValueError("local set belongs to a different prime")
    count, charsum = _local_counts(S, lg, M, chunks)
    total = M * euler_phi(M)
    nu = Fraction(count, total)
    E = Fraction(charsum, count) if count else None
    if E is not None and abs(E) > 1:
        raise ConsistencyError(f"|E_{p}| > 1")
    return LocalResult(p, nu, E, count, charsum, M)


# -- levels and the assembled density -----------------------------------------

def critical_primes(spec: ProblemSpec, dec: RadicalDecomposition, ent: EntanglementData) -> List[int]:
    return prime_divisors(2 * abs(ent.d) * dec.e * spec.modulus * spec.t)


def local_sets(spec: ProblemSpec, primes) -> List[LocalSetSpec]:
    out = []
    for p in primes:
        f_p = p_part(spec.modulus, p)
        out.append(LocalSetSpec(p, p_part(spec.t, p), spec.a if f_p > 1 else None, f_p))
    return out


def build_level(spec: ProblemSpec, dec: Optional[RadicalDecomposition] = None,
                budget: int = DEFAULT_BUDGET) -> LevelGroup:
    dec = dec or decompose(spec.r)
    ent = entanglement(dec)
    N = math.lcm(2, abs(ent.d), spec.modulus)
    for p in critical_primes(spec, dec, ent):
        part = p * p_part(spec.t, p) * p_part(dec.e, p)
        if p == 2 and _negative(dec):
            part *= 2
        N = math.lcm(N, part)
    size = sum(M * euler_phi(M) for M in (p_part(N, p) for p in prime_divisors(N)))
    if size > budget:
        raise LevelBudgetExceeded(f"level {N} needs {size} local elements (budget {budget})")
    return LevelGroup(N, dec, ent)


@dataclass(frozen=True)
class EngineResult:
    spec: ProblemSpec
    density: ExactDensity
    verdict: VanishingVerdict
    correction: Optional[Fraction]
    locals: Tuple[LocalResult, ...]
    level: int
    certified: bool


def evaluate(spec: ProblemSpec, dec: Optional[RadicalDecomposition] = None, certify: bool = True,
             chunks: int = 1, budget: int = DEFAULT_BUDGET) -> EngineResult:
    """Density of G cap S as (1 + prod E_p) * prod nu_p times the Artin tail."""
    lg = build_level(spec, dec, budget)
    primes = critical_primes(spec, lg.dec, lg.ent)
    results = []
    for S in local_sets(spec, primes):
        res = _cached_local(S, lg, lg.local_level(S.p), chunks)
        if certify:
            finer = _cached_local(S, lg, lg.local_level(S.p) * S.p, chunks)
            if (finer.nu, finer.E) != (res.nu, res.E):
                raise LevelNotStable(f"local data at {S.p} changed between levels {res.level} and {finer.level}")
        results.append(res)
    nu = Fraction(1)
    for res in results:
        nu *= res.nu
    if nu == 0:
        return EngineResult(spec, ExactDensity.zero(), VanishingVerdict.of(EMPTY_LOCAL_SET), None,
                            tuple(results), lg.N, certify)
    prod_E = Fraction(1)
    for res in results:
        prod_E *= res.E
    E = 1 + prod_E
    density = ExactDensity(E * nu, True, tuple(primes)) if E else ExactDensity.zero()
    verdict = VanishingVerdict.of(ORACLE_DETECTED if E == 0 else NONE)
    return EngineResult(spec, density, verdict, E, tuple(results), lg.N, certify)


@lru_cache(maxsize=8192)
def _cached_local(S: LocalSetSpec, lg: LevelGroup, M: int, chunks: int) -> LocalResult:
    return local_measure_and_average(S.p, S, lg, chunks=chunks, level=M)


def delta_exact(spec: ProblemSpec, **kwargs) -> ExactDensity:
    return evaluate(spec, **kwargs).density


def direct_count(spec: ProblemSpec, lg: Optional[LevelGroup] = None,
                 budget: int = WHOLE_GROUP_BUDGET) -> ExactDensity:
    """#(G cap S) / #G counted over the whole level group, times the Artin tail.

    No character sums are involved; this is only feasible for small levels.
    """
    lg = lg or build_level(spec)
    if lg.order > budget:
        raise LevelBudgetExceeded(f"level {lg.N} has {lg.order} elements (budget {budget})")
    primes = critical_primes(spec, lg.dec, lg.ent)
    V, U = _grid(lg.N)
    in_S = np.ones(np.broadcast(V, U).shape, dtype=bool)
    for S in local_sets(spec, primes):
        in_S &= _local_mask(V, U, S, lg.dec)
    in_G = _whole_character(V, U, lg) == 1
    good = int(np.count_nonzero(in_S & in_G))
    coeff = Fraction(good, int(np.count_nonzero(in_G)))
    return ExactDensity(coeff, True, tuple(primes)) if good else ExactDensity.zero()
