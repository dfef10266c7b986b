"""Domain model: preferences, welfare predicates, allocation machinery."""

import itertools
import random

import pytest

from hmkt.errors import EmptyPoolError, MarketDataError
from hmkt.market import (
    BETTER,
    INDIFFERENT,
    WORSE,
    Market,
    compare,
    cycle_groups,
    enumerate_allocations,
    equivalent,
    favorites,
    indiff_set,
    is_individually_rational,
    is_pareto_efficient,
    mask_of,
    members,
    pareto_improvement,
)

from markets import (
    EVICTION_CHAIN,
    INDIFFERENT_HUB,
    HUB_MU,
    HUB_OMEGA,
    HUB_SIGMA_P,
    PAIR_SWAP_GAP,
    PG_MU,
    STANDOFF_CYCLE,
    SC_MU,
    STRICT_TRIANGLE,
    ST_MU,
    ST_OMEGA,
    ST_SIGMA,
    ST_SIGMA_P,
    TWIN_OBJECTS,
    TW_DELTA,
    TW_MU,
    TW_SIGMA,
)
from oracles import brute_pareto_efficient, random_market


def all_pool(m):
    return m.all_objects


class TestConstruction:
    def test_rank_normalization_is_dense(self):
        m = Market((1, 0), [(10, 20), (7, 7)])
        assert m.rank == ((0, 1), (0, 0))

    def test_equal_profiles_compare_equal(self):
        a = Market((0, 1), [(3, 9), (5, 5)])
        b = Market((0, 1), [(0, 1), (0, 0)])
        assert a == b and hash(a) == hash(b)

    def test_rejects_non_bijective_endowment(self):
        with pytest.raises(MarketDataError):
            Market((0, 0, 2), [(0, 1, 2)] * 3)

    def test_from_pref_rows_requires_every_object_once(self):
        with pytest.raises(MarketDataError):
            Market.from_pref_rows((0, 1), [[[0]], [[0], [1]]])
        with pytest.raises(MarketDataError):
            Market.from_pref_rows((0, 1), [[[0, 1, 0]], [[0], [1]]])


class TestFavorites:
    def test_indifferent_agent_favors_whole_pool(self):
        assert favorites(INDIFFERENT_HUB, 1, all_pool(INDIFFERENT_HUB)) == 0b111

    def test_singleton_pool(self):
        for m in (STRICT_TRIANGLE, INDIFFERENT_HUB):
            for i in range(m.n):
                assert favorites(m, i, 0b100) == 0b100

    def test_tied_pair_within_restricted_pool(self):
        # twins a and c sit at the same rank for agent 0
        assert favorites(TWIN_OBJECTS, 0, 0b101) == 0b101

    def test_empty_pool_is_an_error(self):
        with pytest.raises(EmptyPoolError):
            favorites(STRICT_TRIANGLE, 0, 0)

    def test_agrees_with_pairwise_comparison(self):
        rng = random.Random(7)
        for _ in range(40):
            m = random_market(rng, rng.randint(1, 5), rng.random())
            pool = rng.randint(1, m.all_objects)
            for i in range(m.n):
                fav = favorites(m, i, pool)
                expected = mask_of(
                    o
                    for o in members(pool)
                    if all(compare(m, i, o, o2) != WORSE for o2 in members(pool))
                )
                assert fav == expected


class TestIndiffAndCompare:
    def test_twin_objects_share_a_class(self):
        assert indiff_set(TWIN_OBJECTS, 0, 0) == 0b101

    def test_strict_market_has_singleton_classes(self):
        for i in range(3):
            for o in range(3):
                assert indiff_set(STRICT_TRIANGLE, i, o) == 1 << o

    def test_universally_indifferent_agent(self):
        assert indiff_set(PAIR_SWAP_GAP, 1, 0) == 0b1111

    def test_compare_examples(self):
        assert compare(STRICT_TRIANGLE, 0, 2, 1) == BETTER  # c over b
        assert compare(STANDOFF_CYCLE, 1, 0, 2) == INDIFFERENT  # a vs c
        assert compare(STRICT_TRIANGLE, 2, 0, 2) == WORSE  # a vs own c

    def test_reflexive_indifference(self):
        for m in (STRICT_TRIANGLE, TWIN_OBJECTS):
            for i in range(m.n):
                for o in range(m.n):
                    assert compare(m, i, o, o) == INDIFFERENT

    def test_total_preorder_on_random_markets(self):
        rng = random.Random(11)
        for _ in range(25):
            m = random_market(rng, rng.randint(2, 5), rng.random())
            for i in range(m.n):
                for o, o2, o3 in itertools.product(range(m.n), repeat=3):
                    # completeness
                    assert compare(m, i, o, o2) in (BETTER, WORSE, INDIFFERENT)
                    # transitivity of the weak relation
                    if compare(m, i, o, o2) != WORSE and compare(m, i, o2, o3) != WORSE:
                        assert compare(m, i, o, o3) != WORSE


class TestWelfarePredicates:
    def test_endowment_allocation_is_rational(self):
        for m in (STRICT_TRIANGLE, INDIFFERENT_HUB, EVICTION_CHAIN):
            assert is_individually_rational(m, m.endow)

    def test_pair_swap_is_rational(self):
        assert is_individually_rational(STRICT_TRIANGLE, ST_MU)

    def test_violation_detected(self):
        # agent 1 ends below the endowment rank
        assert not is_individually_rational(STRICT_TRIANGLE, ST_SIGMA_P)

    def test_twin_swaps_are_equivalent(self):
        assert equivalent(TWIN_OBJECTS, TW_SIGMA, TW_DELTA)

    def test_equivalence_is_reflexive(self):
        assert equivalent(TWIN_OBJECTS, TW_MU, TW_MU)

    def test_distinct_welfare_not_equivalent(self):
        assert not equivalent(TWIN_OBJECTS, TW_MU, TW_SIGMA)

    def test_equivalence_relation_on_random_markets(self):
        rng = random.Random(13)
        for _ in range(10):
            m = random_market(rng, 4, 0.6)
            allocs = list(enumerate_allocations(m))
            sample = rng.sample(allocs, 6)
            for a, b in itertools.product(sample, repeat=2):
                assert equivalent(m, a, b) == equivalent(m, b, a)
                for c in sample:
                    if equivalent(m, a, b) and equivalent(m, b, c):
                        assert equivalent(m, a, c)


class TestParetoEfficiency:
    def test_unique_efficient_allocation(self):
        assert is_pareto_efficient(STRICT_TRIANGLE, ST_SIGMA)

    def test_endowment_can_be_inefficient(self):
        assert not is_pareto_efficient(INDIFFERENT_HUB, HUB_OMEGA)
        improvement = pareto_improvement(INDIFFERENT_HUB, HUB_OMEGA)
        assert improvement is not None
        assert all(
            INDIFFERENT_HUB.rank[i][improvement[i]] <= INDIFFERENT_HUB.rank[i][HUB_OMEGA[i]]
            for i in range(3)
        )

    def test_everyone_on_top_of_own_endowment(self):
        m = Market.from_pref_rows((0, 1, 2), [[[0], [1], [2]], [[1], [0], [2]], [[2], [0], [1]]])
        assert is_pareto_efficient(m, m.endow)

    def test_matches_exhaustive_scan(self):
        rng = random.Random(17)
        for _ in range(30):
            m = random_market(rng, rng.randint(2, 5), rng.random())
            for mu in enumerate_allocations(m):
                assert is_pareto_efficient(m, mu) == brute_pareto_efficient(m, mu)

    def test_efficiency_shared_across_equivalent_allocations(self):
        rng = random.Random(19)
        for _ in range(15):
            m = random_market(rng, 4, 0.7)
            allocs = list(enumerate_allocations(m))
            for a in allocs:
                for b in allocs:
                    if equivalent(m, a, b):
                        assert is_pareto_efficient(m, a) == is_pareto_efficient(m, b)


class TestEnumerationAndCycles:
    def test_enumeration_is_lexicographic_and_complete(self):
        m = STRICT_TRIANGLE
        allocs = list(enumerate_allocations(m))
        assert allocs == sorted(set(allocs))
        assert len(allocs) == 6

    def test_two_pair_decomposition(self):
        assert cycle_groups(PAIR_SWAP_GAP, PG_MU) == [0b0011, 0b1100]

    def test_identity_gives_singletons(self):
        assert cycle_groups(STRICT_TRIANGLE, ST_OMEGA) == [0b001, 0b010, 0b100]

    def test_single_cycle(self):
        assert cycle_groups(STANDOFF_CYCLE, SC_MU) == [0b111]

    def test_groups_partition_and_trade_internally(self):
        rng = random.Random(23)
        for _ in range(30):
            m = random_market(rng, rng.randint(1, 6), rng.random())
            mu = list(range(m.n))
            rng.shuffle(mu)
            mu = tuple(mu)
            groups = cycle_groups(m, mu)
            union = 0
            for g in groups:
                assert g and union & g == 0
                union |= g
                assert mask_of(mu[i] for i in members(g)) == m.omega(g)
                # no proper nonempty subset is setwise invariant
                for k in range(1, bin(g).count("1")):
                    for sub in itertools.combinations(members(g), k):
                        sm = mask_of(sub)
                        assert mask_of(mu[i] for i in sub) != m.omega(sm)
            assert union == m.all_objects
