"""
Tests for the function-class order and the optimal function search.
"""

import json

import numpy as np
import pytest

from nonlinearity_sdk.core import VectorialFunction, anf_to_function, is_bent, parse_anf
from nonlinearity_sdk.exceptions import (
    ConfigurationError,
    ParameterMismatchError,
    SearchError,
    SpaceTooLargeError,
    ValidationError,
)
from nonlinearity_sdk.optimal import (
    SCOPE_ALL,
    SCOPE_FILTERED,
    FunctionCensus,
    bent_coordinate_candidates,
    census_values,
    classify_tables,
    compare_function_classes,
    compare_with_perfect_nonlinear,
    function_class_key,
    optimal_search,
    perfect_nonlinear_members,
    random_candidates,
    select_candidates,
    tables_from_range,
    tables_from_values,
    verify_optimal_equals_pn,
    write_census_jsonl,
    write_summary_json,
)
from nonlinearity_sdk.subspaces import all_rref_rows

# Two-variable bent functions: weight 1 or 3, entry 0 in the top bit
BENT_N2 = {0b0001, 0b0010, 0b0100, 0b1000, 0b0111, 0b1011, 0b1101, 0b1110}


def perfect_nonlinear_4_2():
    f1 = anf_to_function(parse_anf("x1*x3 + x1*x4 + x2*x3", 4))
    f2 = anf_to_function(parse_anf("x1*x3 + x2*x4", 4))
    return VectorialFunction(4, 2, (f1.table.astype(np.int64) << 1) | f2.table)


class TestBatchKernel:
    """Batch classification agrees with the analysis engine."""

    def test_tables_from_range(self):
        tables = tables_from_range(5, 7, 2, 1)
        assert tables.tolist() == [[0, 1, 0, 1], [0, 1, 1, 0]]

    def test_tables_from_values(self):
        assert tables_from_values([0b0110, 0b1001], 2, 2).tolist() == [[0, 0, 1, 2], [0, 0, 2, 1]]
        assert tables_from_values([], 3, 1).shape == (0, 8)

    @pytest.mark.parametrize("r", [1, 2, 3])
    def test_keys_match_analyze(self, rng, r):
        values = [int(v) for v in rng.integers(0, 1 << 8, size=12)]
        keys, _, index = classify_tables(tables_from_values(values, 3, 1), all_rref_rows(4, r), 3, 1)
        for value, position in zip(values, index):
            F = VectorialFunction.from_int(value, 3, 1)
            assert keys[position] == function_class_key(F, r)

    def test_keys_ascending(self):
        keys, multisets, index = classify_tables(tables_from_range(0, 256, 3, 1), all_rref_rows(4, 1), 3, 1)
        assert keys == sorted(keys)
        assert len(multisets) == len(keys)
        assert index.max() == len(keys) - 1


class TestFunctionCensus:
    """Test census bookkeeping, merging and checkpoints."""

    def test_sizes_cover_scan(self):
        census = census_values(3, 1, 1, 0, 256)
        assert census.scanned == 256
        assert sum(cls.member_count for cls in census.classes()) == 256
        assert census.ranges == [(0, 256)]

    def test_merge_matches_single_scan(self):
        whole = census_values(3, 1, 2, 0, 256)
        merged = census_values(3, 1, 2, 100, 256).merge(census_values(3, 1, 2, 0, 100))
        assert merged.classes() == whole.classes()
        assert merged.optimal_members == whole.optimal_members
        assert merged.ranges == [(0, 100), (100, 256)]

    def test_merge_mismatch(self):
        with pytest.raises(ParameterMismatchError):
            FunctionCensus(3, 1, 1).merge(FunctionCensus(3, 1, 2))

    def test_examples_capped(self):
        census = census_values(3, 1, 1, 0, 256)
        for cls in census.classes():
            assert len(cls.examples) <= 8
            assert list(cls.examples) == sorted(cls.examples)

    def test_empty_census(self):
        with pytest.raises(SearchError):
            FunctionCensus(2, 1, 1).optimal()

    def test_checkpoint_resume(self, tmp_path):
        path = tmp_path / "search.json"
        fresh = optimal_search(3, 1, 1)

        census_values(3, 1, 1, 0, 100).save(path)
        resumed = optimal_search(3, 1, 1, checkpoint=path)
        assert resumed.census.scanned == 256
        assert resumed.classes == fresh.classes
        assert resumed.optimal_members == fresh.optimal_members

        stored = FunctionCensus.load(path)
        assert stored.scanned == 256
        assert stored.optimal_members == fresh.optimal_members

    def test_checkpoint_written(self, tmp_path):
        path = tmp_path / "nested" / "search.json"
        optimal_search(2, 1, 1, checkpoint=path)
        data = json.loads(path.read_text())
        assert data["scanned"] == 16
        assert set(data["optimal_members"]) == BENT_N2

    def test_checkpoint_parameter_mismatch(self, tmp_path):
        path = tmp_path / "search.json"
        census_values(3, 1, 1, 0, 10).save(path)
        with pytest.raises(ParameterMismatchError):
            optimal_search(3, 1, 2, checkpoint=path)

    def test_invalid_checkpoint(self, tmp_path):
        path = tmp_path / "search.json"
        path.write_text("not json")
        with pytest.raises(ConfigurationError):
            FunctionCensus.load(path)
        path.write_text(json.dumps({"n": 2}))
        with pytest.raises(ConfigurationError):
            FunctionCensus.load(path)


class TestFunctionClassOrder:
    """Test compare_function_classes."""

    def test_optimal_is_smallest(self):
        classes = optimal_search(3, 1, 1).classes
        assert len(classes) > 1
        for other in classes[1:]:
            assert compare_function_classes(classes[0], other) == -1
            assert compare_function_classes(other, classes[0]) == 1
        assert compare_function_classes(classes[0], classes[0]) == 0

    def test_parameter_mismatch(self):
        a = optimal_search(2, 1, 1).optimal
        b = optimal_search(2, 1, 2).optimal
        with pytest.raises(ParameterMismatchError):
            compare_function_classes(a, b)


class TestOptimalSearch:
    """Exhaustive and filtered searches."""

    def test_two_variables(self):
        result = optimal_search(2, 1, 1)
        assert set(result.optimal_members) == BENT_N2
        assert result.optimal.member_count == 8
        assert result.census.scanned == 16
        assert result.optimal.counts == (3, 1)

    def test_two_variables_equals_perfect_nonlinear(self):
        check = verify_optimal_equals_pn(2, 1, 1)
        assert check.equal
        assert check.optimal_count == check.perfect_nonlinear_count == 8
        assert check.to_dict()["optimal_not_perfect_nonlinear"] == []

    @pytest.mark.slow
    @pytest.mark.parametrize("r", [1, 2])
    def test_four_variables_equals_bent(self, bent_n4, r):
        result = optimal_search(4, 1, r)
        members = set(result.optimal_members)
        assert len(members) == 896
        assert members == bent_n4
        assert 0 not in members and 0xFFFF not in members

    def test_bent_oracle(self, bent_n4):
        assert len(bent_n4) == 896
        for value in sorted(bent_n4)[:20]:
            assert is_bent(VectorialFunction.from_int(value, 4, 1).coordinate(1))

    def test_space_too_large(self):
        with pytest.raises(SpaceTooLargeError) as info:
            optimal_search(4, 2, 1)
        assert info.value.bits == 32
        assert "filtered" in str(info.value)

    def test_unknown_scope(self):
        with pytest.raises(ValidationError):
            optimal_search(2, 1, 1, scope="some")

    def test_filtered_needs_candidates(self):
        with pytest.raises(ValidationError):
            optimal_search(2, 1, 1, scope=SCOPE_FILTERED)

    def test_filtered_scope(self):
        result = optimal_search(2, 1, 1, SCOPE_FILTERED, candidates=[0, 1, 3, 6, 7])
        assert result.census.scope == SCOPE_FILTERED
        assert result.census.scanned == 5
        assert result.optimal_members == [1, 7]

    def test_filtered_predicate(self):
        result = optimal_search(2, 1, 1, SCOPE_FILTERED, candidates=range(16), predicate="balanced")
        assert result.census.scanned == 6
        assert not set(result.optimal_members) & BENT_N2

    def test_perfect_nonlinear_candidates_are_optimal(self):
        """Sampled 4-to-2 functions: every perfect nonlinear one lies in the smallest class."""
        pn = perfect_nonlinear_4_2()
        candidates = (
            bent_coordinate_candidates(4, 2, 30, seed=3)
            + random_candidates(4, 2, 30, seed=4)
            + [pn.to_int()]
        )
        values = select_candidates(candidates, 4, 2)
        result = optimal_search(4, 2, 1, SCOPE_FILTERED, candidates=values)
        check = compare_with_perfect_nonlinear(result, values)
        assert check.perfect_nonlinear_count >= 1
        assert check.perfect_nonlinear_within_optimal
        assert check.equal
        assert pn.to_int() in result.optimal_members

    def test_verify_needs_even_arity(self):
        with pytest.raises(ValidationError):
            verify_optimal_equals_pn(3, 1, 1)
        with pytest.raises(ValidationError):
            verify_optimal_equals_pn(4, 3, 1)

    def test_verify_with_candidates(self):
        check = verify_optimal_equals_pn(2, 1, 1, candidates=[0, 1, 2, 3])
        assert check.scope == SCOPE_FILTERED
        assert check.equal
        assert check.optimal_count == 2


class TestCandidates:
    """Test candidate generators and selection."""

    def test_random_candidates(self):
        values = random_candidates(4, 2, 50, seed=11)
        assert values == sorted(set(values))
        assert all(0 <= v < 1 << 32 for v in values)
        assert values == random_candidates(4, 2, 50, seed=11)

    def test_bent_coordinates(self):
        for value in bent_coordinate_candidates(4, 2, 10, seed=5):
            F = VectorialFunction.from_int(value, 4, 2)
            assert is_bent(F.coordinate(1))
            assert is_bent(F.coordinate(2))

    def test_bent_coordinates_odd_arity(self):
        with pytest.raises(ValidationError):
            bent_coordinate_candidates(3, 1, 5)

    def test_select_functions_and_predicates(self):
        pn = perfect_nonlinear_4_2()
        values = select_candidates([pn, 0, pn.to_int()], 4, 2, "perfect-nonlinear")
        assert values == [pn.to_int()]

    def test_select_unknown_predicate(self):
        with pytest.raises(ValidationError):
            select_candidates([0], 2, 1, "nonsense")

    def test_select_arity_mismatch(self):
        with pytest.raises(ParameterMismatchError):
            select_candidates([VectorialFunction(2, 1, [0, 1, 1, 0])], 3, 1)

    def test_perfect_nonlinear_members(self):
        assert set(perfect_nonlinear_members(range(16), 2, 1)) == BENT_N2
        assert perfect_nonlinear_members([1, 3, 8], 2, 1) == [1, 8]
        assert perfect_nonlinear_members(range(256), 3, 1) == []


class TestOutputFiles:
    """Test census and summary files."""

    def test_census_jsonl(self, tmp_path):
        result = optimal_search(2, 1, 1)
        path = write_census_jsonl(result.census, tmp_path / "out" / "census.jsonl")
        lines = [json.loads(line) for line in path.read_text().splitlines()]
        assert len(lines) == len(result.classes)
        assert lines[0]["size"] == 8
        assert set(lines[0]) == {"N", "H", "size", "first_member_hex"}

    def test_summary_json(self, tmp_path):
        result = optimal_search(2, 1, 1)
        check = compare_with_perfect_nonlinear(result, range(16))
        data = json.loads(write_summary_json(result, tmp_path / "summary.json", check).read_text())
        assert data["scope"] == SCOPE_ALL
        assert data["optimal_member_count"] == 8
        assert data["perfect_nonlinear"]["equal"] is True

    def test_summary_without_check(self, tmp_path):
        result = optimal_search(2, 1, 1)
        data = json.loads(write_summary_json(result, tmp_path / "summary.json").read_text())
        assert data["perfect_nonlinear"] is None
