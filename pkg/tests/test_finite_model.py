import itertools
from fractions import Fraction

import pytest

from artin_densities import densities as D
from artin_densities import finite_model as fm
from artin_densities.cli import sweep_specs
from artin_densities.problem import ProblemSpec
from artin_densities.radical import decompose

CARD_R = [2, 8, 5, -4, -8, -64, 27]
CARD_P = [2, 4, 8, 3, 9, 5, 7]


def test_group_axioms_level_12():
    lg = fm.LevelGroup(12, decompose(-3))
    elems = list(lg.elements())
    assert len(elems) == lg.order == 48
    e = lg.identity()
    for g in elems:
        assert lg.mul(g, e) == g == lg.mul(e, g)
        assert lg.mul(g, lg.inverse(g)) == e
    for g, h, k in itertools.islice(itertools.product(elems, repeat=3), 0, None, 7):
        assert lg.mul(lg.mul(g, h), k) == lg.mul(g, lg.mul(h, k))


def test_level_validation():
    with pytest.raises(ValueError):
        fm.LevelGroup(9, decompose(2))
    with pytest.raises(ValueError):
        fm.LevelGroup(4, decompose(2))  # |d| = 8 does not divide 4


@pytest.mark.parametrize("r", CARD_R)
@pytest.mark.parametrize("P", CARD_P)
def test_card_A_formula_matches_enumeration(r, P):
    dec = decompose(r)
    assert fm.card_A_formula(P, dec) == fm.card_A_enumerated(P, dec)


def test_card_A_twisted_exceptions():
    dec = decompose(-4)
    assert fm.card_A(2, dec) == 2
    assert fm.card_A(4, dec) == 4
    assert fm.card_A(8, dec) == 16


@pytest.mark.parametrize("r, N", [(5, 10), (2, 8), (-3, 12), (Fraction(6, 5), 120), (-4, 16)])
def test_kernel_has_index_two(r, N):
    lg = fm.LevelGroup(N, decompose(r))
    info = fm.galois_kernel(lg)
    assert 2 * info.size == info.order
    if lg.order <= 5000:
        assert sum(info.predicate(g) for g in lg.elements()) == info.size


def test_kernel_is_subgroup():
    lg = fm.LevelGroup(24, decompose(Fraction(-9, 4)))
    info = fm.galois_kernel(lg)
    kernel = [g for g in lg.elements() if info.predicate(g)]
    for g in kernel[::5]:
        for h in kernel[::7]:
            assert info.predicate(lg.mul(g, h))


def test_character_sum_path_agrees_with_enumeration():
    lg = fm.LevelGroup(120, decompose(Fraction(6, 5)))
    assert fm.galois_kernel(lg).size == fm.galois_kernel(lg, budget=0).size


def test_local_averages_bounded(sweep_r):
    for spec in sweep_specs([Fraction(r) for r in sweep_r], 12, 8):
        for loc in fm.evaluate(spec).locals:
            assert 0 <= loc.nu <= 1
            assert loc.E is None or abs(loc.E) <= 1


def test_twist_invariance(sweep_r):
    for spec in sweep_specs([Fraction(r) for r in sweep_r], 12, 12):
        dec = decompose(spec.r)
        a, b = fm.evaluate(spec, dec=dec), fm.evaluate(spec, dec=dec.with_r0(-dec.r0))
        assert a.density == b.density
        at2 = {l.p: (l.nu, l.E) for l in a.locals}[2]
        assert at2 == {l.p: (l.nu, l.E) for l in b.locals}[2]


def test_direct_count_r2():
    for spec in sweep_specs([Fraction(2)], 16, 8):
        assert fm.direct_count(spec) == fm.delta_exact(spec), spec


def test_direct_count_small_levels(sweep_r):
    checked = 0
    for spec in sweep_specs([Fraction(r) for r in sweep_r], 12, 6):
        lg = fm.build_level(spec)
        if lg.order <= 50_000:
            assert fm.direct_count(spec, lg) == fm.delta_exact(spec), spec
            checked += 1
    assert checked > 300


def test_oracle_matches_closed_forms():
    for spec in sweep_specs([Fraction(r) for r in (2, -4, 5, 27, Fraction(-9, 4))], 12, 12):
        closed = D.closed_form(spec)
        if closed is not None:
            assert closed[0] == fm.delta_exact(spec), spec


@pytest.mark.parametrize("spec", [ProblemSpec(5), ProblemSpec(2, 1, 4, 4), ProblemSpec(-64, 7, 24, 3),
                                  ProblemSpec(Fraction(6, 5), 1, 15)])
def test_partition_invariance(spec):
    results = {fm.evaluate(spec, chunks=c) for c in (1, 2, 3, 7)}
    assert len({(r.density.artin_multiple, tuple((l.nu, l.E) for l in r.locals)) for r in results}) == 1


def test_local_data_stable_under_refinement():
    spec = ProblemSpec(-64, 3, 8, 2)
    lg = fm.build_level(spec)
    for S in fm.local_sets(spec, fm.critical_primes(spec, lg.dec, lg.ent)):
        M = lg.local_level(S.p)
        base = fm.local_measure_and_average(S.p, S, lg, level=M)
        finer = fm.local_measure_and_average(S.p, S, lg, level=M * S.p * S.p)
        assert (base.nu, base.E) == (finer.nu, finer.E)


def test_budget():
    with pytest.raises(fm.LevelBudgetExceeded):
        fm.build_level(ProblemSpec(2, 1, 24, 12), budget=50)  # level 72: 32 + 54 local elements
    with pytest.raises(fm.LevelBudgetExceeded):
        fm.direct_count(ProblemSpec(5, 1, 24), budget=10)
