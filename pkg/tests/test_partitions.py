import itertools
import math

import pytest
from hypothesis import given, settings, strategies as st

from bimono import partitions as pt
from bimono.partitions import (
    OrderedTwoFacedPartition,
    TwoFacedPartition,
    count_bimonotone_all,
    count_bimonotone_pp,
    count_orderings,
    double_factorial,
    enumerate_bimonotone_orderings,
    enumerate_pair_partitions,
    is_bi_monotone,
    is_bi_noncrossing,
    is_interval,
    is_irreducible,
    is_monotone,
    is_noncrossing,
    verify_decomposition_identity,
)


def all_patterns(m):
    return ("".join(p) for p in itertools.product("lr", repeat=m))


def all_set_partitions(m):
    """All set partitions of [m] via restricted growth strings."""
    def rec(labels, next_label):
        if len(labels) == m:
            yield labels
            return
        for lab in range(next_label + 1):
            yield from rec(labels + [lab], max(next_label, lab + 1))

    for labels in rec([], 0):
        blocks = {}
        for i, lab in enumerate(labels, start=1):
            blocks.setdefault(lab, []).append(i)
        yield pt.canonical(blocks.values())


class TestEnumeratePairPartitions:
    def test_empty_ground_set(self):
        assert list(enumerate_pair_partitions(0)) == [()]

    def test_m4_by_hand(self):
        got = set(enumerate_pair_partitions(4))
        assert got == {((1, 2), (3, 4)), ((1, 3), (2, 4)), ((1, 4), (2, 3))}

    def test_odd_m_is_empty(self):
        assert list(enumerate_pair_partitions(3)) == []
        assert list(enumerate_pair_partitions(7)) == []

    @pytest.mark.parametrize("m", [2, 4, 6, 8, 10])
    def test_double_factorial_count(self, m):
        parts = list(enumerate_pair_partitions(m))
        assert len(parts) == double_factorial(m - 1)
        assert len(set(parts)) == len(parts)
        for blocks in parts:
            assert all(len(b) == 2 for b in blocks)


class TestClassifiers:
    def test_noncrossing(self):
        assert is_noncrossing(((1, 4), (2, 3)))
        assert not is_noncrossing(((1, 3), (2, 4)))
        assert is_noncrossing(((1, 2), (3, 4)))

    def test_interval(self):
        assert is_interval(((1, 2), (3, 4)))
        assert not is_interval(((1, 4), (2, 3)))
        assert is_interval(((1,), (2,), (3,)))

    def test_monotone(self):
        assert is_monotone(((2, 3), (1, 4)))
        assert not is_monotone(((1, 4), (2, 3)))

    def test_monotone_pair_orderings_of_6_total_15(self):
        total = sum(1 for blocks in enumerate_pair_partitions(6)
                    for perm in itertools.permutations(blocks)
                    if is_monotone(perm))
        assert total == 15

    def test_bi_noncrossing_figure_example(self):
        p = TwoFacedPartition(((1, 4), (2, 3), (5, 6)), "rrrlll")
        assert is_bi_noncrossing(p)

    def test_bi_noncrossing_constant_pattern_is_noncrossing(self):
        assert not is_bi_noncrossing(TwoFacedPartition(((1, 3), (2, 4)), "rrrr"))

    def test_bi_noncrossing_mixed_crossing(self):
        # brute-force value of the four-point condition: the only crossing
        # quadruple is (1,2,3,4) with faces r,l,r,l at b=2, c=3 -- different
        # faces, so no same-face crossing exists
        assert is_bi_noncrossing(TwoFacedPartition(((1, 3), (2, 4)), "rlrl"))

    def test_bi_monotone_single_block(self):
        assert is_bi_monotone(OrderedTwoFacedPartition(((1, 2),), "lr"))

    def test_figure_orderings(self):
        # {1,4} must be below {2,3}; {5,6} is free
        blocks = ((1, 4), (2, 3), (5, 6))
        good = [perm for perm in itertools.permutations(blocks)
                if is_bi_monotone(OrderedTwoFacedPartition(perm, "rrrlll"))]
        assert len(good) == 3
        for perm in good:
            assert perm.index((1, 4)) < perm.index((2, 3))

    def test_irreducible(self):
        assert is_irreducible(((1, 4), (2, 3)))
        assert not is_irreducible(((1, 2), (3, 4)))
        assert is_irreducible(((1, 3), (2, 4)))


class TestConstantPatternSpecialization:
    @pytest.mark.parametrize("m", [2, 3, 4, 5])
    def test_bi_noncrossing_equals_noncrossing(self, m):
        for blocks in all_set_partitions(m):
            for face in "lr":
                assert (is_bi_noncrossing(TwoFacedPartition(blocks, face * m))
                        == is_noncrossing(blocks))

    @pytest.mark.parametrize("m", [2, 3, 4, 5])
    def test_bi_monotone_left_equals_monotone(self, m):
        for blocks in all_set_partitions(m):
            for perm in itertools.permutations(blocks):
                assert (is_bi_monotone(OrderedTwoFacedPartition(perm, "l" * m))
                        == is_monotone(perm))

    @pytest.mark.parametrize("m", [2, 3, 4, 5])
    def test_bi_monotone_right_equals_reversed_monotone(self, m):
        # the right face carries the opposite (antimonotone) order
        for blocks in all_set_partitions(m):
            for perm in itertools.permutations(blocks):
                assert (is_bi_monotone(OrderedTwoFacedPartition(perm, "r" * m))
                        == is_monotone(perm[::-1]))

    @pytest.mark.parametrize("m", [2, 4, 6, 8])
    def test_pair_partitions_constant_left(self, m):
        for blocks in enumerate_pair_partitions(m):
            for perm in itertools.permutations(blocks):
                assert (is_bi_monotone(OrderedTwoFacedPartition(perm, "l" * m))
                        == is_monotone(perm))


class TestCounting:
    def test_length_two_patterns(self):
        assert [count_bimonotone_pp(p) for p in ("ll", "lr", "rl", "rr")] == [1] * 4

    def test_empty_pattern(self):
        assert count_bimonotone_pp("") == 1

    def test_odd_length_is_zero(self):
        assert count_bimonotone_pp("l") == 0
        assert count_bimonotone_pp("rlr") == 0

    @pytest.mark.parametrize("n", range(1, 6))
    def test_constant_pattern_is_double_factorial(self, n):
        assert count_bimonotone_pp("l" * 2 * n) == double_factorial(2 * n - 1)
        assert count_bimonotone_pp("r" * 2 * n) == double_factorial(2 * n - 1)

    def test_rrrlll_value(self):
        # 3 orderings from the nested partition plus the other two pair
        # partitions' contributions, confirmed by naive enumeration below
        assert count_bimonotone_pp("rrrlll") == 14

    @pytest.mark.parametrize("m", [0, 2, 4, 6])
    def test_matches_naive_enumeration(self, m):
        for pattern in all_patterns(m):
            naive = sum(1 for _ in enumerate_bimonotone_orderings(pattern))
            assert naive == count_bimonotone_pp(pattern), pattern

    @given(st.text(alphabet="lr", min_size=8, max_size=8))
    @settings(max_examples=25, deadline=None)
    def test_matches_naive_enumeration_length8(self, pattern):
        naive = sum(1 for _ in enumerate_bimonotone_orderings(pattern))
        assert naive == count_bimonotone_pp(pattern)

    @pytest.mark.parametrize("n,expected",
                             [(0, 1), (1, 4), (2, 48), (3, 928), (4, 24448)])
    def test_all_pattern_totals(self, n, expected):
        assert count_bimonotone_all(n) == expected

    @pytest.mark.parametrize("n", range(4))
    def test_all_equals_per_pattern_sum(self, n):
        per_pattern = sum(count_bimonotone_pp(p) for p in all_patterns(2 * n))
        assert count_bimonotone_all(n) == per_pattern

    def test_workers_agree(self):
        assert count_bimonotone_all(3, workers=2) == 928


class TestInvariants:
    @pytest.mark.parametrize("m", [2, 4, 6, 8])
    def test_count_bounded_by_double_factorial(self, m):
        bound = double_factorial(m - 1)
        for pattern in all_patterns(m):
            assert count_bimonotone_pp(pattern) <= bound

    @given(st.text(alphabet="lr", min_size=10, max_size=10))
    @settings(max_examples=20, deadline=None)
    def test_count_bounded_length10(self, pattern):
        assert count_bimonotone_pp(pattern) <= double_factorial(9)

    @pytest.mark.parametrize("m", [2, 4, 6, 8])
    def test_reflection_face_swap_symmetry(self, m):
        swap = {"l": "r", "r": "l"}
        for pattern in all_patterns(m):
            mirrored = "".join(swap[c] for c in reversed(pattern))
            assert count_bimonotone_pp(pattern) == count_bimonotone_pp(mirrored)

    @pytest.mark.parametrize("m", [2, 4, 6, 8])
    def test_bimonotone_implies_bi_noncrossing(self, m):
        for pattern in all_patterns(m):
            for blocks in enumerate_pair_partitions(m):
                if count_orderings(blocks, pattern) > 0:
                    assert is_bi_noncrossing(TwoFacedPartition(blocks, pattern))

    @pytest.mark.parametrize("m", [4, 6])
    def test_bimonotone_implies_bi_noncrossing_ordered(self, m):
        for pattern in all_patterns(m):
            for p in enumerate_bimonotone_orderings(pattern):
                assert is_bi_noncrossing(p.unordered())

    @pytest.mark.parametrize("m", [2, 4, 6, 8])
    def test_interval_pair_partitions(self, m):
        for blocks in enumerate_pair_partitions(m):
            if is_interval(blocks):
                assert is_noncrossing(blocks)
                for perm in itertools.permutations(blocks):
                    assert is_monotone(perm)


class TestDecompositionIdentity:
    @pytest.mark.parametrize("m", [2, 4, 6])
    def test_holds_for_all_patterns(self, m):
        for pattern in all_patterns(m):
            assert verify_decomposition_identity(pattern), pattern

    def test_odd_length_rejected(self):
        with pytest.raises(ValueError):
            verify_decomposition_identity("lrl")


class TestValidation:
    def test_bad_pattern_rejected(self):
        with pytest.raises(ValueError):
            count_bimonotone_pp("lx")

    def test_pattern_length_mismatch_rejected(self):
        with pytest.raises(ValueError):
            TwoFacedPartition(((1, 2),), "lll")

    def test_overlapping_blocks_rejected(self):
        with pytest.raises(ValueError):
            TwoFacedPartition(((1, 2), (2, 3)), "lll")


class TestJsonRoundTrip:
    def test_partition(self):
        blocks = ((1, 4), (2, 3))
        assert pt.partition_from_json(pt.partition_to_json(blocks)) == blocks

    def test_ordered_two_faced(self):
        p = OrderedTwoFacedPartition(((2, 3), (1, 4), (5, 6)), "rrrlll")
        data = pt.ordered_two_faced_to_json(p)
        assert pt.ordered_two_faced_from_json(data) == p

    def test_count_table(self):
        table = {"ll": 1, "llll": 3, "lrrl": 3}
        data = pt.count_table_to_json(table)
        assert all(isinstance(v, str) for v in data.values())
        assert pt.count_table_from_json(data) == table
