"""
Tests for canonical enumeration of rank-r linear maps.
"""

import itertools

import numpy as np
import pytest

from nonlinearity_sdk.exceptions import ArityError, RankOutOfRangeError, ValidationError
from nonlinearity_sdk.subspaces import (
    LinearMap,
    SubspaceRange,
    all_rref_rows,
    canonicalize,
    enumerate_rref,
    gaussian_binomial,
    iter_rref_blocks,
    rank_one_order,
    rank_rref,
    split_range,
    unrank_rref,
)


def gaussian_closed_form(N, r):
    numerator = 1
    denominator = 1
    for i in range(r):
        numerator *= (1 << (N - i)) - 1
        denominator *= (1 << (i + 1)) - 1
    return numerator // denominator


class TestGaussianBinomial:
    """Test subspace counts."""

    @pytest.mark.parametrize("N,r,expected", [(5, 1, 31), (5, 2, 155), (8, 4, 200787), (8, 2, 10795)])
    def test_known_values(self, N, r, expected):
        assert gaussian_binomial(N, r) == expected

    def test_edges(self):
        assert gaussian_binomial(7, 0) == 1
        assert gaussian_binomial(7, 7) == 1

    def test_closed_form(self):
        for N in range(1, 11):
            for r in range(0, N + 1):
                assert gaussian_binomial(N, r) == gaussian_closed_form(N, r)

    def test_out_of_range(self):
        with pytest.raises(ValidationError):
            gaussian_binomial(65, 1)


class TestLinearMap:
    """Test LinearMap validation and rendering."""

    def test_render_vectorial(self):
        U = LinearMap.from_rref_rows([0b100101], 6)
        assert U.pivot_cols == (0,)
        assert U.render(4) == ["x1+x4+y2"]

    def test_render_conventional(self):
        U = LinearMap.from_rref_rows([0b10100, 0b00011], 5)
        assert U.render() == ["x1+x3", "x4+x5"]

    def test_not_reduced(self):
        with pytest.raises(ValidationError):
            LinearMap.from_rref_rows([0b110, 0b010], 3)

    def test_to_matrix(self):
        U = LinearMap.from_rref_rows([0b101, 0b011], 3)
        assert U.to_matrix().tolist() == [[1, 0, 1], [0, 1, 1]]


class TestEnumeration:
    """Test the canonical enumeration order, ranking and unranking."""

    def test_counts_match_closed_form(self):
        for N in range(1, 8):
            for r in range(1, N + 1):
                assert all_rref_rows(N, r).shape == (gaussian_closed_form(N, r), r)

    @pytest.mark.slow
    def test_streamed_counts_match_closed_form(self):
        for N in range(8, 11):
            for r in range(1, N + 1):
                total = 0
                for start, rows in iter_rref_blocks(N, r):
                    assert start == total
                    total += rows.shape[0]
                assert total == gaussian_closed_form(N, r)

    def test_every_map_is_canonical_and_distinct(self):
        for N in range(1, 7):
            for r in range(1, N + 1):
                seen = set()
                for U in enumerate_rref(N, r):
                    assert canonicalize(U.rows, N).linear_map == U
                    seen.add(U.rows)
                assert len(seen) == gaussian_binomial(N, r)

    def test_exhaustive_canonicalization(self):
        """Every rank-r bit matrix with N <= 5 lands in the enumerated set."""
        for N in range(1, 6):
            for r in range(1, min(N, 3) + 1):
                enumerated = {tuple(row) for row in all_rref_rows(N, r).tolist()}
                for rows in itertools.product(range(1 << N), repeat=r):
                    result = canonicalize(rows, N)
                    if result.is_full_rank:
                        assert result.linear_map.rows in enumerated

    @pytest.mark.slow
    def test_exhaustive_canonicalization_high_rank(self):
        """Ranks 4 and 5 over five columns: every matrix at r=4, every row set at r=5."""
        N = 5
        enumerated = {tuple(row) for row in all_rref_rows(N, 4).tolist()}
        reached = set()
        for rows in itertools.product(range(1 << N), repeat=4):
            result = canonicalize(rows, N)
            if result.is_full_rank:
                assert result.linear_map.rows in enumerated
                reached.add(result.linear_map.rows)
        assert reached == enumerated

        (identity,) = [tuple(row) for row in all_rref_rows(N, 5).tolist()]
        for rows in itertools.combinations(range(1, 1 << N), 5):
            for ordered in (rows, rows[::-1]):
                result = canonicalize(ordered, N)
                if result.is_full_rank:
                    assert result.linear_map.rows == identity

    def test_rank_unrank(self):
        for N, r in [(5, 2), (6, 3), (8, 4)]:
            total = gaussian_binomial(N, r)
            for index in np.linspace(0, total - 1, 25).astype(int).tolist():
                U = unrank_rref(N, r, index)
                assert rank_rref(U) == index

    def test_unrank_matches_stream(self):
        rows = all_rref_rows(6, 3)
        for index in (0, 1, 17, 500, rows.shape[0] - 1):
            assert unrank_rref(6, 3, index).rows == tuple(rows[index].tolist())

    def test_pivot_sets_lexicographic(self):
        pivots = [U.pivot_cols for U in enumerate_rref(5, 2)]
        distinct = list(dict.fromkeys(pivots))
        assert distinct == sorted(distinct)
        assert distinct[0] == (0, 1)

    def test_rank_one_order(self):
        assert rank_one_order(3).tolist() == [4, 5, 6, 7, 2, 3, 1]
        assert rank_one_order(5).tolist() == all_rref_rows(5, 1)[:, 0].tolist()

    def test_blocks_respect_bounds(self):
        total = gaussian_binomial(7, 3)
        starts = []
        collected = []
        for start, rows in iter_rref_blocks(7, 3, 100, 2000, max_rows=37):
            assert rows.shape[0] <= 37
            starts.append(start)
            collected.append(rows)
        assert starts[0] == 100
        joined = np.concatenate(collected)
        assert joined.shape[0] == 1900
        assert joined.tolist() == all_rref_rows(7, 3)[100:2000].tolist()
        assert total > 2000

    def test_empty_range(self):
        assert list(iter_rref_blocks(5, 2, 7, 7)) == []

    def test_bad_range(self):
        with pytest.raises(ValidationError):
            list(iter_rref_blocks(5, 2, 0, 1000))

    def test_rank_out_of_range(self):
        with pytest.raises(RankOutOfRangeError):
            unrank_rref(5, 6, 0)

    def test_block_bits_limit(self):
        from nonlinearity_sdk.config import update_config

        update_config(limits={"max_subspace_block_bits": 4})
        with pytest.raises(ArityError):
            list(iter_rref_blocks(6, 2))


class TestCanonicalize:
    """Test Gaussian elimination."""

    def test_rank_deficient(self):
        result = canonicalize([0b011, 0b110, 0b101], 3)
        assert result.rank == 2
        assert not result.is_full_rank
        assert result.linear_map.rows == (0b101, 0b011)

    def test_zero_rows(self):
        result = canonicalize([0, 0], 4)
        assert result.rank == 0


class TestSplitRange:
    """Test shard splitting."""

    def test_disjoint_cover(self):
        ranges = split_range(8, 4, 7)
        assert ranges[0].lo == 0
        assert ranges[-1].hi == gaussian_binomial(8, 4)
        for left, right in zip(ranges, ranges[1:]):
            assert left.hi == right.lo

    def test_more_parts_than_maps(self):
        assert len(split_range(2, 2, 10)) == 1

    def test_invalid_range(self):
        with pytest.raises(ValidationError):
            SubspaceRange(5, 2)
