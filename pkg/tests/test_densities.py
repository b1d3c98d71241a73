import math
import random
from fractions import Fraction

import pytest

from artin_densities import densities as D
from artin_densities.cli import sweep_specs
from artin_densities.problem import (
    CAUSES, EMPTY_LOCAL_SET, NONE, ORACLE_DETECTED, ExactDensity, InvalidSpec, ProblemSpec,
    artin_constant, artin_constant_bounds, artin_constant_float,
)
from artin_densities.radical import decompose


def multiple(x: ExactDensity) -> Fraction:
    return x.artin_multiple


# -- the constant -----------------------------------------------------------------

def test_artin_constant_strings():
    assert artin_constant(7) == "0.3739558"
    assert artin_constant(6) == "0.373956"
    assert artin_constant(10) == "0.3739558136"
    with pytest.raises(ValueError):
        artin_constant(0)


def test_artin_constant_inside_direct_product_enclosure():
    lo, hi = artin_constant_bounds(10**6)
    assert lo < artin_constant_float() < hi
    assert hi - lo < 1e-5


# -- worked values ------------------------------------------------------------------

@pytest.mark.parametrize("call, expected, cause", [
    (lambda: D.artin_density(5), Fraction(20, 19), NONE),
    (lambda: D.artin_density(2), Fraction(1), NONE),
    (lambda: D.artin_density(4), Fraction(0), "naive-measure-zero"),
    (lambda: D.artin_density(-3), Fraction(6, 5), NONE),
    (lambda: D.ap_density(2, 3, 4), Fraction(1, 2), NONE),
    (lambda: D.ap_density(5, 1, 5), Fraction(0), "thm-5.8-a"),
    (lambda: D.ap_density(27, 3, 4), Fraction(0), "thm-5.8-b"),
    (lambda: D.ap_density(-4, 3, 4), Fraction(1), NONE),
    (lambda: D.near_density(2, 2), Fraction(3, 4), NONE),
    (lambda: D.near_density(-4, 2), Fraction(0), "thm-6.7-b"),
    (lambda: D.near_density(5, 5), Fraction(0), "thm-6.7-a"),
    (lambda: D.near_density(-27, 2), Fraction(0), "thm-6.7-c"),
])
def test_worked_values(call, expected, cause):
    density, verdict = call()
    assert multiple(density) == expected
    assert verdict.cause == cause
    assert verdict.vanishes == (expected == 0)


def test_generic_combined_value():
    density, verdict = D.generic_density(ProblemSpec(2, 1, 4, 4))
    assert multiple(density) == Fraction(1, 8) and not verdict.vanishes
    density, verdict = D.generic_density(ProblemSpec(2, 3, 8, 4))
    assert density.coeff == 0 and verdict.cause == EMPTY_LOCAL_SET


def test_square_rejected_by_inclusion_exclusion():
    with pytest.raises(InvalidSpec):
        D.inclusion_exclusion_density(9, 10)


def test_exact_density_equality_is_value_based():
    a = ExactDensity(Fraction(1, 4), True, (2,))  # (1/4) A / (1 - 1/2)
    b = ExactDensity(Fraction(1, 2), True, ())
    assert a == b and hash(a) == hash(b)
    assert ExactDensity.zero() == ExactDensity(Fraction(0), True, (2, 3))
    assert a.normalized().excluded_tail_primes == ()


# -- invariants -------------------------------------------------------------------

def _samples(n=30, seed=7):
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        r = Fraction(rng.choice([-1, 1]) * rng.randint(2, 40), rng.randint(1, 9)) ** rng.randint(1, 4)
        if abs(r) != 1:
            out.append(r)
    return out


@pytest.mark.parametrize("r", _samples())
def test_reduction_coherence(r):
    plain = D.artin_density(r)[0]
    assert D.ap_density(r, 1, 1)[0] == plain
    assert D.near_density(r, 1)[0] == plain


@pytest.mark.parametrize("r", _samples(12, seed=3))
def test_progressions_partition(r):
    plain = multiple(D.artin_density(r)[0])
    for f in (3, 4, 5, 8, 12):
        total = sum(multiple(D.ap_density(r, a, f)[0]) for a in range(f) if math.gcd(a, f) == 1)
        assert total == plain


@pytest.mark.parametrize("r", [2, 5, -4, -64, Fraction(6, 5)])
def test_combined_partition(r):
    for t, f in ((2, 4), (3, 9), (4, 8), (2, 6)):
        parts = [D.generic_density(ProblemSpec(r, a, f, t))[0]
                 for a in range(f) if math.gcd(a, f) == 1 and a % t == 1 % t]
        assert sum(multiple(p) for p in parts) == multiple(D.near_density(r, t)[0])


def _sweep(sweep_r):
    return list(sweep_specs([Fraction(r) for r in sweep_r], 24, 12))


def test_range_and_vanishing_coherence(sweep_r):
    seen = 0
    for spec in _sweep(sweep_r):
        if spec.kind == "combined":
            continue
        density, verdict = D.closed_form(spec)
        seen += 1
        assert 0 <= float(density) <= 1
        assert verdict.cause in CAUSES and verdict.cause != ORACLE_DETECTED
        assert verdict.vanishes == (density.coeff == 0)
        if spec.kind == "progression":
            E = D.ap_correction(spec.r, spec.a, spec.f) if not D._is_square(spec.r) else None
        elif spec.kind == "near":
            E = D.near_correction(spec.r, spec.t)
        else:
            E = D.artin_correction(spec.r)
        if E is not None:
            assert 0 <= E <= 2
    assert seen > 1000


def test_near_vanishing_classifier_is_complete(sweep_r):
    for r in sweep_r:
        for t in range(1, 13):
            arithmetic = D.near_naive_measure(r, t).coeff * D.near_correction(r, t)
            assert (arithmetic == 0) == (D.classify_near(r, t) != NONE), (r, t)


@pytest.mark.parametrize("r", [2, 3, 5, 6, -2])
def test_inclusion_exclusion_contains_closed_form(r):
    box = D.inclusion_exclusion_density(r, 10**4)
    lo_A, hi_A = artin_constant_bounds(10**6)
    m = multiple(D.artin_density(r)[0])
    assert box.lo <= m * Fraction(hi_A) and m * Fraction(lo_A) <= box.hi
    assert box.width < Fraction(1, 100)


def test_inclusion_exclusion_single_term():
    box = D.inclusion_exclusion_density(2, 1)
    assert box.contains(1)


@pytest.mark.parametrize("r", [4, 36, -4, -64, Fraction(9, 4), Fraction(-9, 4), 100, -36])
def test_sign_twist_closed_form(r):
    """For even e the sign of r0 is a convention; every r0-dependent piece must ignore it."""
    dec = decompose(r)
    assert dec.e % 2 == 0
    flip = dec.with_r0(-dec.r0)
    assert D.s2_value(dec) == D.s2_value(flip)
    for t in range(1, 13):
        assert D.near_E2(dec, t) == D.near_E2(flip, t)
        assert D._alpha2(dec, t) == D._alpha2(flip, t)
    for f in (3, 4, 5, 8, 12, 24):
        for a in range(f):
            if math.gcd(a, f) == 1:
                assert D._ap_formula(dec, a, f) == D._ap_formula(flip, a, f)
                assert D._ap_empty(dec, a, f) == D._ap_empty(flip, a, f)
