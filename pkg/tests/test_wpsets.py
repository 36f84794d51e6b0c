import random

import pytest

from cwsolve.oracle import check_representative
from cwsolve.partitions import Partition, canonicalize, iter_partitions
from cwsolve.wpsets import (MAX, MIN, NEG_INF, POS_INF, WPSet, ac_reduce,
                            acjoin, cut_row, join_sets, max_weight_basis,
                            proj, query_opt, rmc)
from cwsolve.wpsets import reduce as reduce_set

from conftest import random_partition, random_wpset


def P(*blocks, ground=None):
    if ground is None:
        ground = [e for blk in blocks for e in blk]
    return canonicalize(blocks, ground)


class TestRmc:
    def test_max_keeps_heavier(self):
        p = P({1, 2})
        out = rmc([(p, 3), (p, 5)], p.ground, MAX)
        assert out.entries[p] == (5, None)

    def test_min_keeps_lighter(self):
        p = P({1, 2})
        out = rmc([(p, 3), (p, 5)], p.ground, MIN)
        assert out.entries[p] == (3, None)

    def test_distinct_partitions_untouched(self):
        p, q = P({1, 2}), P({1}, {2})
        out = rmc([(p, 3), (q, 5)], p.ground, MAX)
        assert len(out) == 2

    def test_tie_prefers_lexicographically_smallest_witness(self):
        p = P({1})
        out = rmc([(p, 3, frozenset({"b"})), (p, 3, frozenset({"a"}))], p.ground, MAX)
        assert out.entries[p] == (3, frozenset({"a"}))


class TestProj:
    def test_block_inside_dropped_set_kills_entry(self):
        a = WPSet.from_pairs([(P({1, 2}, {3}), 4)], 0b1110, MAX)
        assert len(proj(a, [3])) == 0

    def test_partial_overlap_restricts(self):
        a = WPSet.from_pairs([(P({1, 2}, {3}), 4)], 0b1110, MAX)
        out = proj(a, [2])
        assert out.entries == {P({1}, {3}, ground=[1, 3]): (4, None)}

    def test_empty_drop_is_identity(self):
        a = WPSet.from_pairs([(P({1, 2}), 4)], 0b110, MAX)
        assert proj(a, []).entries == a.entries


class TestJoins:
    def test_disjoint_grounds(self):
        a = WPSet.from_pairs([(P({1}), 5)], 0b10, MAX)
        b = WPSet.from_pairs([(P({2}), 3)], 0b100, MAX)
        out = join_sets(a, b)
        assert out.entries == {P({1}, {2}): (8, None)}

    def test_overlapping_grounds_merge(self):
        a = WPSet.from_pairs([(P({1}), 5)], 0b10, MAX)
        b = WPSet.from_pairs([(P({1, 2}), 3)], 0b110, MAX)
        out = join_sets(a, b)
        assert out.entries == {P({1, 2}): (8, None)}

    def test_empty_side_gives_empty(self):
        a = WPSet(0b10, MAX)
        b = WPSet.from_pairs([(P({1}), 3)], 0b10, MAX)
        assert len(join_sets(a, b)) == 0
        assert len(acjoin(b, a)) == 0

    def test_acjoin_accepts_tree_link(self):
        a = WPSet.from_pairs([(P({1}), 5)], 0b10, MAX)
        b = WPSet.from_pairs([(P({1, 2}), 3)], 0b110, MAX)
        assert acjoin(a, b).entries == {P({1, 2}): (8, None)}

    def test_acjoin_rejects_duplicate_link(self):
        a = WPSet.from_pairs([(P({1, 2}), 1)], 0b110, MAX)
        assert len(acjoin(a, a)) == 0

    def test_acjoin_equals_filtered_bruteforce(self):
        rng = random.Random(11)
        for _ in range(200):
            ga = sum(1 << e for e in rng.sample(range(1, 6), rng.randint(1, 3)))
            gb = sum(1 << e for e in rng.sample(range(1, 6), rng.randint(1, 3)))
            a = random_wpset(rng, ga, 4)
            b = random_wpset(rng, gb, 4)
            got = acjoin(a, b)
            union = ga | gb
            expect = WPSet(union, MAX)
            from cwsolve.partitions import acyclic
            for p, (w1, _) in a.entries.items():
                for q, (w2, _) in b.entries.items():
                    pu = p.extend(union & ~ga)
                    qu = q.extend(union & ~gb)
                    if acyclic(pu, qu):
                        expect.add(pu.join(qu), w1 + w2)
            assert got.entries == expect.entries


class TestBasis:
    def test_independent_rows_all_selected(self):
        assert sorted(max_weight_basis([0b01, 0b10], [5, 3], MAX)) == [0, 1]

    def test_identical_rows_keep_best(self):
        assert max_weight_basis([0b01, 0b01], [3, 5], MAX) == [1]
        assert max_weight_basis([0b01, 0b01], [3, 5], MIN) == [0]

    def test_dependent_triple_exchanges_up(self):
        r1, r2 = 0b011, 0b101
        r3 = r1 ^ r2
        chosen = sorted(max_weight_basis([r1, r2, r3], [1, 1, 5], MAX))
        assert chosen == [0, 2]  # weight 6; verified against all candidate bases

    def test_exhaustive_optimality_small(self):
        from itertools import combinations
        rng = random.Random(3)
        for _ in range(100):
            rows = [rng.randrange(1, 16) for _ in range(5)]
            weights = [rng.randint(0, 9) for _ in range(5)]
            chosen = max_weight_basis(rows, weights, MAX)
            got = sum(weights[i] for i in chosen)

            def rank(idxs):
                basis = []
                for i in idxs:
                    v = rows[i]
                    for b in basis:
                        v = min(v, v ^ b)
                    if v:
                        basis.append(v)
                        basis.sort(reverse=True)
                return len(basis)

            full = rank(range(5))
            assert rank(chosen) == len(chosen) == full
            best = max(sum(weights[i] for i in sub)
                       for r in range(full, full + 1)
                       for sub in combinations(range(5), r)
                       if rank(sub) == full)
            assert got == best


class TestCutRows:
    def test_popcount_is_two_to_blocks_minus_one(self):
        rng = random.Random(17)
        for _ in range(300):
            nbits = rng.randint(1, 8)
            ground = sum(1 << rng.randrange(9) for _ in range(nbits))
            p = random_partition(rng, ground)
            assert cut_row(p).bit_count() == 1 << (len(p.blocks) - 1)


class TestReduce:
    def test_empty_ground_keeps_single_best(self):
        empty = Partition(0, ())
        a = rmc([(empty, 7), (empty, 2)], 0, MAX)
        out = reduce_set(a)
        assert out.entries == {empty: (7, None)}

    def test_size_bound_v4(self):
        rng = random.Random(23)
        ground = 0b11110
        a = random_wpset(rng, ground, 100)
        out = reduce_set(a)
        assert len(out) <= 8

    def test_ac_size_bound_v4(self):
        rng = random.Random(29)
        ground = 0b11110
        a = random_wpset(rng, ground, 200)
        out = ac_reduce(a)
        assert len(out) <= 32

    def test_outputs_are_subsets(self):
        rng = random.Random(31)
        ground = 0b1110
        a = random_wpset(rng, ground, 30)
        for out in (reduce_set(a), ac_reduce(a)):
            for p, entry in out.entries.items():
                assert a.entries[p] == entry

    def test_exhaustive_queries_agree_v3(self):
        rng = random.Random(37)
        ground = 0b1110
        for _ in range(50):
            a = random_wpset(rng, ground, 12)
            assert check_representative(a, reduce_set(a), "plain")
            assert check_representative(a, ac_reduce(a), "acyclic")
            b = random_wpset(rng, ground, 12, direction=MIN)
            assert check_representative(b, reduce_set(b), "plain")

    def test_ac_reduce_rejects_minimization(self):
        with pytest.raises(ValueError):
            ac_reduce(WPSet(0b10, MIN))


class TestContracts:
    def test_direction_mismatch_rejected(self):
        a = WPSet(0b10, MAX)
        b = WPSet(0b10, MIN)
        with pytest.raises(ValueError):
            join_sets(a, b)
        with pytest.raises(ValueError):
            a.update(WPSet(0b100, MAX))

    def test_proj_outside_ground_rejected(self):
        a = WPSet(0b10, MAX)
        with pytest.raises(ValueError):
            proj(a, [5])

    def test_unknown_direction_and_mode_rejected(self):
        with pytest.raises(ValueError):
            WPSet(0b10, "best")
        with pytest.raises(ValueError):
            query_opt(WPSet(0b10, MAX), Partition.singletons(0b10), "fuzzy")


class TestQueryOpt:
    def test_acyclic_completion(self):
        a = WPSet.from_pairs([(P({1, 2}), 4)], 0b110, MAX)
        assert query_opt(a, P({1}, {2}), "acyclic") == 4

    def test_empty_set_sentinels(self):
        assert query_opt(WPSet(0b10, MAX), P({1}), "plain") == NEG_INF
        assert query_opt(WPSet(0b10, MIN), P({1}), "plain") == POS_INF

    def test_singletons_complete_against_whole(self):
        ground = 0b1110
        a = WPSet.from_pairs([(Partition.singletons(ground), 9)], ground, MAX)
        whole = Partition.whole(ground)
        assert query_opt(a, whole, "plain") == 9
        assert query_opt(a, whole, "acyclic") == 9


class TestPreservationSmoke:
    # The full 500-trial suites live in the acceptance module; these are
    # fast spot checks for each operator family.
    def test_ops_preserve_representation(self):
        rng = random.Random(41)
        ground = 0b1110
        for _ in range(40):
            a = random_wpset(rng, ground, 10)
            small = ac_reduce(a)
            x = 1 << rng.choice([1, 2, 3])
            assert check_representative(proj(a, x), proj(small, x), "acyclic")
            b = random_wpset(rng, ground, 4)
            assert check_representative(acjoin(a, b), acjoin(small, b), "acyclic")
            merged_full = a.copy()
            merged_full.update(b)
            merged_small = small.copy()
            merged_small.update(b)
            assert check_representative(merged_full, merged_small, "acyclic")
