"""Concrete maps of realized sums: composition, pairing, decomposition."""

import random

import pytest

from globkit import theta0
from globkit.globe import Table, all_tables, disk, realize_sum, sword, tword
from globkit.theta0 import MatchingError


def small_tables(max_width=3, max_dim=3):
    return [t for t in all_tables(max_width, max_dim)]


def test_compose_identity_and_shared_cell():
    tab = Table((1, 1), (0,))
    f = theta0.leg_gmap(tab, 1)
    assert theta0.compose(theta0.identity_gmap(tab), f) == f
    assert theta0.compose(f, theta0.identity_gmap(disk(1))) == f
    # eps1 . s1 agrees with eps2 . t1: both pick the glued middle object
    left = theta0.compose(theta0.leg_gmap(tab, 0), theta0.globe_functor(sword(0, 1)))
    right = theta0.compose(theta0.leg_gmap(tab, 1), theta0.globe_functor(tword(0, 1)))
    assert left == right


def test_no_dimension_collapsing_maps():
    # cell maps cannot lower dimension: collapses such as D1 -> D0 only
    # appear as unit generators one level up, never in the concrete layer
    assert theta0.enumerate_homs(disk(1), disk(0)) == ()
    assert len(theta0.enumerate_homs(disk(0), disk(0))) == 1


def test_compose_associative_random():
    rng = random.Random(1)
    tables = small_tables(3, 3)
    triples = 0
    while triples < 300:
        a, b, c, d = (rng.choice(tables) for _ in range(4))
        homs1 = theta0.enumerate_homs(a, b)
        homs2 = theta0.enumerate_homs(b, c)
        homs3 = theta0.enumerate_homs(c, d)
        if not (homs1 and homs2 and homs3):
            continue
        f, g, h = rng.choice(homs1), rng.choice(homs2), rng.choice(homs3)
        lhs = theta0.compose(h, theta0.compose(g, f))
        rhs = theta0.compose(theta0.compose(h, g), f)
        assert lhs == rhs
        assert theta0.compose(f, theta0.identity_gmap(a)) == f
        assert theta0.compose(theta0.identity_gmap(b), f) == f
        triples += 1


def test_pair_of_legs_is_identity_width_up_to_4():
    for table in all_tables(4, 3):
        legs = tuple(theta0.leg_gmap(table, k) for k in range(table.width))
        assert theta0.pair(legs, table) == theta0.identity_gmap(table)


def test_pair_of_inner_legs():
    # pairing two adjacent legs of a wider sum embeds the smaller sum
    tab = Table((1, 1), (0,))
    t3 = Table((1, 1, 1), (0, 0))
    emb = theta0.legs_pair_gmap(t3, (1, 2), tab)
    assert emb.source == tab and emb.target == t3
    assert emb.maps[1] == (realize_sum(t3).legs[1][1][0], realize_sum(t3).legs[2][1][0])


def test_pair_matching_violation_reports_position():
    tab = Table((1, 1), (0,))
    # two legs of a disjoint-looking choice: eps1 with itself mismatches
    f = theta0.leg_gmap(tab, 0)
    with pytest.raises(MatchingError) as exc:
        theta0.pair((f, f), tab)
    assert exc.value.k == 0 and exc.value.dim == 0


def test_globe_functor_examples():
    s1 = theta0.globe_functor(sword(0, 1))
    assert s1.maps[0] == (0,)
    t20 = theta0.globe_functor(tword(0, 2))
    assert t20.maps[0] == (1,)
    s2 = theta0.globe_functor(sword(1, 2))
    # commutes with boundaries by construction; the 1-cell goes to the s-face
    assert s2.maps[1] == (0,)
    assert s2.maps[0] == (0, 1)


def test_disk_sourced_maps_decompose_as_leg_and_word():
    for table in small_tables(3, 3):
        for m in range(0, 4):
            for gm in theta0.enumerate_homs(disk(m), table):
                k, w = theta0.decompose(gm)
                rebuilt = theta0.compose(theta0.leg_gmap(table, k),
                                         theta0.globe_functor(w))
                assert rebuilt == gm


def test_enumerate_homs_counts_match_cells():
    # maps out of a disk are exactly the cells of that dimension (Yoneda)
    for table in small_tables(3, 3):
        real = realize_sum(table)
        for m in range(table.dimension + 1):
            assert len(theta0.enumerate_homs(disk(m), table)) == real.carrier.count(m)
