import random
from fractions import Fraction as Q

import pytest

from ergolab.ledrapier import (
    SiteFunctional,
    base_event,
    event_measure,
    identity_holds,
    pair_measure,
    reduce_functional,
    shift_functional,
    site_functional,
    symdiff_identity_check,
    triple_measure,
    xor_functionals,
)
from oracles import gf2_window_measure


def test_single_site_reduction_spreads_by_binomial_parity():
    # height 2^k expands to exactly the two endpoints of the submask range
    for k in range(0, 7):
        reduced = reduce_functional(site_functional(0, 2**k, 1))
        assert reduced.sites == frozenset({(0, 0), (2**k, 0)})
        assert reduced.constant == 1
    # height 3 has all of 0..3 as submasks
    reduced = reduce_functional(site_functional(5, 3))
    assert reduced.sites == frozenset({(5, 0), (6, 0), (7, 0), (8, 0)})


def test_dyadic_family_exact_values():
    for k in range(1, 11):
        z, w = (2**k, 0), (0, 2**k)
        assert pair_measure(z) == Q(1, 4)
        assert pair_measure(w) == Q(1, 4)
        assert triple_measure(z, w) == Q(0)
        assert symdiff_identity_check(k)


def test_base_event_measure_is_half():
    assert event_measure([base_event()]) == Q(1, 2)


def test_pairwise_independent_but_triple_degenerate():
    # the triple intersection vanishes although each pair has product measure
    z, w = (4, 0), (0, 4)
    mu_a = event_measure([base_event()])
    assert pair_measure(z) == mu_a * mu_a
    assert pair_measure(w) == mu_a * mu_a
    assert triple_measure(z, w) == Q(0)


def test_mismatched_translations_break_the_identity():
    assert not identity_holds((3, 0), (0, 1))
    assert triple_measure((3, 0), (0, 1)) == Q(1, 8)
    assert not identity_holds((2, 0), (0, 1))


def test_generic_translations_give_independent_pairs():
    rng = random.Random(7)
    seen = set()
    while len(seen) < 20:
        z = (rng.randint(-9, 9), rng.randint(0, 9))
        if z == (0, 0) or z in seen:
            continue
        seen.add(z)
        assert pair_measure(z) == Q(1, 4), z


def test_event_measure_matches_window_enumeration():
    rng = random.Random(20240814)
    checked = 0
    while checked < 25:
        system = []
        for _ in range(rng.randint(1, 3)):
            sites = frozenset(
                (rng.randint(-3, 3), rng.randint(0, 6))
                for _ in range(rng.randint(1, 3))
            )
            system.append(SiteFunctional(sites, rng.randint(0, 1)))
        span = max(a + b for f in system for a, b in f.sites) - min(
            a for f in system for a, _ in f.sites
        )
        if span + 1 > 18:
            continue
        assert event_measure(system) == gf2_window_measure(system)
        checked += 1


def test_measure_is_translation_invariant():
    rng = random.Random(99)
    base = base_event()
    for _ in range(10):
        z = (rng.randint(-5, 5), rng.randint(0, 5))
        w = (rng.randint(-5, 5), rng.randint(0, 5))
        system = [base, shift_functional(base, z), shift_functional(base, w)]
        shift = (rng.randint(-20, 20), rng.randint(0, 8))
        moved = [shift_functional(f, shift) for f in system]
        assert event_measure(moved) == event_measure(system)


def test_inconsistent_and_redundant_systems():
    f = site_functional(2, 1, 0)
    contradiction = SiteFunctional(f.sites, 1)
    assert event_measure([f, contradiction]) == Q(0)
    assert event_measure([f, f]) == Q(1, 2)
    assert event_measure([]) == Q(1)


def test_xor_cancels_shared_sites():
    f = xor_functionals(site_functional(0, 0, 1), site_functional(0, 0, 1))
    assert f.sites == frozenset()
    assert f.constant == 0


def test_sites_below_generating_row_rejected():
    with pytest.raises(ValueError):
        site_functional(0, -1)
    with pytest.raises(ValueError):
        shift_functional(base_event(), (0, -3))


def test_wide_heights_hit_expansion_cap():
    with pytest.raises(ValueError):
        reduce_functional(site_functional(0, 2**17 - 1))


def test_dyadic_identity_is_fast_at_large_k():
    # powers of two keep the expansion at two sites however tall the shift
    assert symdiff_identity_check(40)
    assert triple_measure((2**40, 0), (0, 2**40)) == Q(0)
