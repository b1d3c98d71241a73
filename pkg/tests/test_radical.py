import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from artin_densities.numtheory import rational_root
from artin_densities.radical import decompose, entanglement, power_index_bruteforce


@pytest.mark.parametrize("r, r0, e, twisted, h", [
    (8, 2, 3, False, 3),
    (-4, 2, 2, True, 1),
    (-64, 2, 6, True, 3),
    (Fraction(-9, 4), Fraction(3, 2), 2, True, 1),
    (-8, -2, 3, False, 3),
    (5, 5, 1, False, 1),
    (4, 2, 2, False, 2),
])
def test_decompose_examples(r, r0, e, twisted, h):
    dec = decompose(r)
    assert (dec.r0, dec.e, dec.twisted, dec.h) == (r0, e, twisted, h)


def test_entanglement_examples():
    ent = entanglement(decompose(-4))
    assert ent.d == 8 and ent.D_r == -4 and ent.d2 == 8
    ent = entanglement(decompose(Fraction(6, 5)))
    assert ent.d == 120 and ent.odd_critical_primes == (3, 5) and ent.d2 == 8
    assert entanglement(decompose(Fraction(-9, 4))).d == 24
    assert entanglement(decompose(-8)).d == -8
    assert entanglement(decompose(-64)).e2 == 2


@pytest.mark.parametrize("bad", [0, 1, -1])
def test_rejects_units(bad):
    with pytest.raises(ValueError):
        decompose(bad)


def _random_rationals(n, seed=1):
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        base = Fraction(rng.randint(1, 60), rng.randint(1, 12))
        r = rng.choice([1, -1]) * base ** rng.randint(1, 12)
        if r not in (1, -1):
            out.append(r)
    return out


@pytest.mark.parametrize("r", _random_rationals(500))
def test_round_trip(r):
    dec = decompose(r)
    assert (-1 if dec.twisted else 1) * dec.r0**dec.e == r
    # r0 is not itself a perfect power up to sign
    for k in range(2, 8):
        assert rational_root(abs(dec.r0), k) is None
    if dec.e % 2 == 0:
        assert dec.r0 > 0
    assert dec.twisted == (rational_root(-r, 2) is not None)


@given(st.integers(-300, 300).filter(lambda x: abs(x) > 1), st.integers(1, 8))
def test_h_is_largest_power_index(x, k):
    r = Fraction(x) ** k
    assert decompose(r).h == power_index_bruteforce(r, 64)
