"""
Optimal functions: the smallest class under the order on (N_f, H_f).

Functions are analyzed in the vectorial framework (maps over n + m columns)
at a fixed r. A class is smaller when N_f is smaller, or when N_f ties and
H_f is larger, which is exactly the ascending order of (N, entropy key).

The full function space is scanned by truth-table integer (entry 0 most
significant, m bits per entry) in sharded ranges; censuses merge
commutatively and can be checkpointed between shards.
"""

import json
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .config import get_config
from .core import (
    VectorialFunction,
    _pack_entries,
    _unpack_entries,
    fwht,
    is_balanced,
    is_perfect_nonlinear,
    parity,
)
from .distributions import ClassKey, InducedDistribution, count_outcomes, group_multisets, support_entropy
from .exceptions import (
    ConfigurationError,
    ParameterMismatchError,
    SearchError,
    SpaceTooLargeError,
    ValidationError,
)
from .logging import get_analysis_logger, get_logger, log_operation
from .nonlinearity import analyze
from .parallel import run_sharded, split_intervals, uncovered_intervals
from .subspaces import all_rref_rows
from .validation import ArityValidator, RankValidator

SCOPE_ALL = "all"
SCOPE_FILTERED = "filtered"

MAX_TABLE_BITS = 62  # table integers handled as int64 in full scans

PREDICATES: Dict[str, Callable[[VectorialFunction], bool]] = {
    "balanced": is_balanced,
    "perfect-nonlinear": is_perfect_nonlinear,
}

# =====================
# Function Classes
# =====================


@dataclass(frozen=True)
class FunctionClass:
    """
    Functions sharing (N_f, entropy key) at fixed (n, m, r).

    Args:
        counts: Count multiset of the top induced class, descending
        examples: Smallest member table integers, ascending
    """

    n: int
    m: int
    r: int
    zero_count: int
    entropy_key: int
    counts: Tuple[int, ...]
    member_count: int
    examples: Tuple[int, ...]

    @property
    def parameters(self) -> Tuple[int, int, int]:
        return (self.n, self.m, self.r)

    @property
    def order_key(self) -> ClassKey:
        return (self.zero_count, self.entropy_key)

    @property
    def entropy_bits(self) -> float:
        return support_entropy(InducedDistribution(self.r, self.counts, 1 << self.n))

    def member_hex(self, value: int) -> str:
        return VectorialFunction.from_int(value, self.n, self.m).to_hex()

    def to_dict(self, decimals: Optional[int] = None) -> dict:
        decimals = get_config().output.entropy_decimals if decimals is None else decimals
        return {
            "N": self.zero_count,
            "H": round(self.entropy_bits, decimals),
            "size": self.member_count,
            "first_member_hex": self.member_hex(self.examples[0]),
        }


def compare_function_classes(a: FunctionClass, b: FunctionClass) -> int:
    """
    Returns:
        -1 if a < b, 1 if a > b, 0 if equal

    Raises:
        ParameterMismatchError: If the classes come from different (n, m, r)
    """
    if a.parameters != b.parameters:
        raise ParameterMismatchError(a.parameters, b.parameters)
    return (a.order_key > b.order_key) - (a.order_key < b.order_key)


# =====================
# Function Census
# =====================


@dataclass
class FunctionTally:
    size: int
    counts: Tuple[int, ...]
    examples: List[int]


@dataclass
class FunctionCensus:
    """
    Mergeable census of function classes.

    Keeps every member of the smallest class seen so far, so the optimal set
    is available after a full scan.
    """

    n: int
    m: int
    r: int
    scope: str = SCOPE_ALL
    scanned: int = 0
    ranges: List[Tuple[int, int]] = field(default_factory=list)
    tallies: Dict[ClassKey, FunctionTally] = field(default_factory=dict)
    optimal_key: Optional[ClassKey] = None
    optimal_members: List[int] = field(default_factory=list)

    @property
    def parameters(self) -> Tuple[int, int, int]:
        return (self.n, self.m, self.r)

    def _absorb(self, key: ClassKey, size: int, counts, examples: List[int], members) -> None:
        max_examples = get_config().output.max_examples
        tally = self.tallies.get(key)
        if tally is None:
            self.tallies[key] = FunctionTally(
                size, tuple(int(c) for c in counts), sorted(examples)[:max_examples]
            )
        else:
            tally.size += size
            tally.examples = sorted(set(tally.examples) | set(examples))[:max_examples]

        if members is None:
            return
        if self.optimal_key is None or key < self.optimal_key:
            self.optimal_key = key
            self.optimal_members = sorted(members)
        elif key == self.optimal_key:
            self.optimal_members = sorted(set(self.optimal_members) | set(members))

    def add(
        self,
        values: Sequence[int],
        class_index: np.ndarray,
        keys: Sequence[ClassKey],
        multisets: Sequence[Sequence[int]],
    ) -> None:
        """
        Record a batch of functions.

        Args:
            values: Table integers of the batch
            class_index: Index into keys of every function's class
            keys: Distinct class keys
            multisets: Top count multiset of each key
        """
        for position, key in enumerate(keys):
            members = [values[i] for i in np.flatnonzero(class_index == position)]
            if members:
                self._absorb(key, len(members), multisets[position], members, members)
        self.scanned += len(values)

    def merge(self, other: "FunctionCensus") -> "FunctionCensus":
        """
        Raises:
            ParameterMismatchError: If the censuses come from different (n, m, r)
        """
        if self.parameters != other.parameters:
            raise ParameterMismatchError(self.parameters, other.parameters)
        merged = FunctionCensus(self.n, self.m, self.r, self.scope)
        for source in (self, other):
            merged.scanned += source.scanned
            merged.ranges.extend(source.ranges)
            for key, tally in source.tallies.items():
                merged._absorb(key, tally.size, tally.counts, tally.examples, None)
            if source.optimal_key is not None:
                merged._merge_optimal(source.optimal_key, source.optimal_members)
        merged.ranges.sort()
        return merged

    def _merge_optimal(self, key: ClassKey, members: List[int]) -> None:
        if self.optimal_key is None or key < self.optimal_key:
            self.optimal_key = key
            self.optimal_members = list(members)
        elif key == self.optimal_key:
            self.optimal_members = sorted(set(self.optimal_members) | set(members))

    def classes(self) -> List[FunctionClass]:
        """All classes, smallest (optimal) first."""
        return [
            FunctionClass(
                self.n,
                self.m,
                self.r,
                key[0],
                key[1],
                tally.counts,
                tally.size,
                tuple(tally.examples),
            )
            for key, tally in sorted(self.tallies.items())
        ]

    def optimal(self) -> FunctionClass:
        """
        Raises:
            SearchError: If nothing has been scanned
        """
        if not self.tallies:
            raise SearchError("No functions scanned; the census is empty")
        return self.classes()[0]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "r": self.r,
            "scope": self.scope,
            "scanned": self.scanned,
            "ranges": [list(rng) for rng in self.ranges],
            "classes": [
                {
                    "N": key[0],
                    "key": key[1],
                    "size": tally.size,
                    "counts": list(tally.counts),
                    "examples": tally.examples,
                }
                for key, tally in sorted(self.tallies.items())
            ],
            "optimal_key": list(self.optimal_key) if self.optimal_key else None,
            "optimal_members": self.optimal_members,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "FunctionCensus":
        try:
            census = cls(data["n"], data["m"], data["r"], data.get("scope", SCOPE_ALL))
            census.scanned = int(data["scanned"])
            census.ranges = [tuple(rng) for rng in data.get("ranges", [])]
            for entry in data.get("classes", []):
                census.tallies[(entry["N"], entry["key"])] = FunctionTally(
                    entry["size"], tuple(entry["counts"]), list(entry["examples"])
                )
            if data.get("optimal_key") is not None:
                census.optimal_key = tuple(data["optimal_key"])
                census.optimal_members = list(data.get("optimal_members", []))
        except (KeyError, TypeError) as e:
            raise ConfigurationError(f"Invalid census checkpoint: {e}", "checkpoint")
        return census

    def save(self, path: Union[str, Path]) -> None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(path.suffix + ".tmp")
        tmp.write_text(json.dumps(self.to_dict()), encoding="utf-8")
        tmp.replace(path)

    @classmethod
    def load(cls, path: Union[str, Path]) -> "FunctionCensus":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            raise ConfigurationError(f"Invalid census checkpoint: {e}", "checkpoint", str(path))
        return cls.from_dict(data)


@dataclass(frozen=True)
class SearchResult:
    """Optimal class plus the census it was taken from."""

    optimal: FunctionClass
    census: FunctionCensus

    @property
    def classes(self) -> List[FunctionClass]:
        return self.census.classes()

    @property
    def optimal_members(self) -> List[int]:
        return self.census.optimal_members


# =====================
# Batch Kernel
# =====================


def tables_from_range(lo: int, hi: int, n: int, m: int) -> np.ndarray:
    """Output tables of the functions with table integers in [lo, hi), shape (hi-lo, 2^n)."""
    size = 1 << n
    values = np.arange(lo, hi, dtype=np.int64)
    shifts = m * np.arange(size - 1, -1, -1, dtype=np.int64)
    return (values[:, None] >> shifts) & ((1 << m) - 1)


def tables_from_values(values: Sequence[int], n: int, m: int) -> np.ndarray:
    if not len(values):
        return np.empty((0, 1 << n), dtype=np.int64)
    return np.stack([_unpack_entries(int(v), 1 << n, m) for v in values])


def classify_tables(tables: np.ndarray, rows: np.ndarray, n: int, m: int):
    """
    Top induced class of every function in a batch.

    Args:
        tables: (F, 2^n) output tables
        rows: (S, r) every canonical rank-r map over n + m columns

    Returns:
        (keys, multisets, class_index): distinct top keys ascending, one count
        multiset per key, and the index into keys of every function
    """
    F = tables.shape[0]
    S = rows.shape[0]
    points = (np.arange(1 << n, dtype=np.int64) << m) | tables
    counts = count_outcomes(points, rows).reshape(F * S, -1)
    groups = group_multisets(counts)

    distinct = sorted(set(groups.keys))
    position = {key: i for i, key in enumerate(distinct)}
    rank = np.array([position[key] for key in groups.keys], dtype=np.int64)
    top = rank[groups.inverse].reshape(F, S).max(axis=1)

    used = np.unique(top)
    keys = [distinct[i] for i in used]
    multisets = []
    for i in used:
        u = groups.keys.index(distinct[i])
        multisets.append(tuple(int(c) for c in groups.multisets[u]))
    class_index = np.searchsorted(used, top)
    return keys, multisets, class_index


def _batch_size(S: int, n: int) -> int:
    return max(1, get_config().parallel.block_elements // (S * (1 << n)))


def census_values(
    n: int, m: int, r: int, lo: int = 0, hi: int = 0, values: Optional[Sequence[int]] = None
) -> FunctionCensus:
    """
    Census of the functions in [lo, hi) or of an explicit list of table integers.
    """
    rows = all_rref_rows(n + m, r)
    batch = _batch_size(rows.shape[0], n)
    census = FunctionCensus(n, m, r, SCOPE_ALL if values is None else SCOPE_FILTERED)
    analysis_logger = get_analysis_logger()
    analysis_logger.log_shard_started("functions", lo, hi if values is None else len(values), r=r)
    started = time.perf_counter()

    if values is None:
        for start in range(lo, hi, batch):
            end = min(hi, start + batch)
            tables = tables_from_range(start, end, n, m)
            keys, multisets, index = classify_tables(tables, rows, n, m)
            census.add(list(range(start, end)), index, keys, multisets)
        if hi > lo:
            census.ranges.append((lo, hi))
    else:
        for start in range(0, len(values), batch):
            chunk = [int(v) for v in values[start : start + batch]]
            keys, multisets, index = classify_tables(tables_from_values(chunk, n, m), rows, n, m)
            census.add(chunk, index, keys, multisets)

    analysis_logger.log_shard_completed(
        "functions", lo, hi, time.perf_counter() - started, r=r, scanned=census.scanned
    )
    return census


def _search_task(task) -> FunctionCensus:
    n, m, r, lo, hi, values = task
    return census_values(n, m, r, lo, hi, values)


# =====================
# Candidates
# =====================


def random_candidates(n: int, m: int, count: int, seed: Optional[int] = None) -> List[int]:
    """`count` uniformly random functions, as sorted distinct table integers."""
    ArityValidator.validate_vectorial(n, m)
    rng = np.random.default_rng(seed)
    tables = rng.integers(0, 1 << m, size=(count, 1 << n), dtype=np.int64)
    return sorted({_pack_entries(table, m) for table in tables})


def bent_coordinate_candidates(
    n: int, m: int, limit: int, seed: Optional[int] = None
) -> List[int]:
    """
    Functions whose coordinates are Maiorana-McFarland bent functions.

    Each coordinate is f(u, v) = u . pi(v) + g(v) with u the first n/2 input
    bits, pi a random permutation and g a random function of v.

    Raises:
        ValidationError: If n is odd
    """
    ArityValidator.validate_vectorial(n, m)
    if n % 2:
        raise ValidationError("bent coordinates need an even n", field="n", value=n)
    half = n // 2
    rng = np.random.default_rng(seed)
    xs = np.arange(1 << n, dtype=np.int64)
    u = xs >> half
    v = xs & ((1 << half) - 1)

    candidates = set()
    for _ in range(limit):
        table = np.zeros(1 << n, dtype=np.int64)
        for j in range(m):
            permutation = rng.permutation(1 << half)
            offset = rng.integers(0, 2, size=1 << half)
            coordinate = parity(u & permutation[v]).astype(np.int64) ^ offset[v]
            table |= coordinate << (m - 1 - j)
        candidates.add(_pack_entries(table, m))
    return sorted(candidates)


def select_candidates(
    candidates: Iterable[Union[int, VectorialFunction]],
    n: int,
    m: int,
    predicate: Optional[Union[str, Callable[[VectorialFunction], bool]]] = None,
) -> List[int]:
    if isinstance(predicate, str):
        if predicate not in PREDICATES:
            raise ValidationError(
                f"unknown predicate {predicate!r}",
                field="predicate",
                value=predicate,
                expected=sorted(PREDICATES),
            )
        predicate = PREDICATES[predicate]

    values = set()
    for candidate in candidates:
        if isinstance(candidate, VectorialFunction):
            if (candidate.n, candidate.m) != (n, m):
                raise ParameterMismatchError((candidate.n, candidate.m), (n, m))
            function = candidate
        else:
            function = VectorialFunction.from_int(int(candidate), n, m)
        if predicate is None or predicate(function):
            values.add(function.to_int())
    return sorted(values)


def perfect_nonlinear_members(values: Sequence[int], n: int, m: int) -> List[int]:
    """
    The table integers among `values` whose functions are perfect nonlinear.

    `values` may be a list or a unit-step range of table integers.
    """
    if n % 2 or not len(values):
        return []
    if not isinstance(values, range):
        values = list(values)
    magnitude = 1 << (n // 2)
    width = 1 << (n + m)
    batch = max(1, get_config().parallel.block_elements // width)
    members = []
    for start in range(0, len(values), batch):
        chunk = values[start : start + batch]
        if isinstance(chunk, range):
            tables = tables_from_range(chunk.start, chunk.stop, n, m)
        else:
            tables = tables_from_values(chunk, n, m)
        points = (np.arange(1 << n, dtype=np.int64) << m) | tables
        indicator = np.zeros((len(chunk), width), dtype=np.int64)
        indicator[np.arange(len(chunk))[:, None], points] = 1
        spectrum = fwht(indicator).reshape(len(chunk), 1 << n, 1 << m)
        flat = np.all(np.abs(spectrum[:, :, 1:]) == magnitude, axis=(1, 2))
        members.extend(chunk[i] for i in np.flatnonzero(flat))
    return members


# =====================
# Search
# =====================


def function_class_key(function: VectorialFunction, r: int) -> ClassKey:
    """(N_f, entropy key) of one function via the analysis engine."""
    return analyze(function, r, jobs=1).class_key


@log_operation("optimal_search")
def optimal_search(
    n: int,
    m: int,
    r: int,
    scope: str = SCOPE_ALL,
    candidates: Optional[Iterable[Union[int, VectorialFunction]]] = None,
    predicate: Optional[Union[str, Callable[[VectorialFunction], bool]]] = None,
    jobs: Optional[int] = None,
    checkpoint: Optional[Union[str, Path]] = None,
) -> SearchResult:
    """
    Classify a function space and return its smallest class.

    Args:
        n, m: Arities of the vectorial functions
        r: Dimension of the maps, 1..n+m
        scope: "all" for every function, "filtered" for `candidates`
        candidates: Table integers or functions (scope="filtered")
        predicate: Name in PREDICATES or a callable filtering the candidates
        jobs: Worker processes
        checkpoint: JSON file resumed from and updated after each shard (scope="all")

    Raises:
        SpaceTooLargeError: If scope="all" exceeds the configured search bits
        RankOutOfRangeError: If r is outside 1..n+m
    """
    ArityValidator.validate_vectorial(n, m)
    RankValidator.validate(r, n + m)
    settings = get_config()
    jobs = settings.parallel.jobs if jobs is None else jobs
    parts = max(1, jobs) * settings.parallel.shards_per_job

    if scope == SCOPE_ALL:
        bits = m * (1 << n)
        limit = min(settings.limits.max_search_bits, MAX_TABLE_BITS)
        if bits > limit:
            raise SpaceTooLargeError(
                bits, limit, "use scope=filtered with random or bent-coordinate candidates"
            )
        total = 1 << bits
        census = FunctionCensus(n, m, r, SCOPE_ALL)
        if checkpoint is not None and Path(checkpoint).exists():
            census = FunctionCensus.load(checkpoint)
            if census.parameters != (n, m, r):
                raise ParameterMismatchError(census.parameters, (n, m, r))
            get_logger().info("Resuming search from checkpoint", path=str(checkpoint), scanned=census.scanned)
        shards = split_intervals(uncovered_intervals(total, census.ranges), parts)
        tasks = [(n, m, r, lo, hi, None) for lo, hi in shards]
    elif scope == SCOPE_FILTERED:
        if candidates is None:
            raise ValidationError("scope=filtered needs candidates", field="candidates")
        values = select_candidates(candidates, n, m, predicate)
        total = len(values)
        census = FunctionCensus(n, m, r, SCOPE_FILTERED)
        tasks = [
            (n, m, r, 0, 0, values[lo:hi]) for lo, hi in (split_intervals([(0, total)], parts) if total else [])
        ]
    else:
        raise ValidationError(
            f"unknown scope {scope!r}", field="scope", value=scope, expected=[SCOPE_ALL, SCOPE_FILTERED]
        )

    analysis_logger = get_analysis_logger()
    state = {"census": census}

    def absorb(partial: FunctionCensus) -> None:
        state["census"] = state["census"].merge(partial)
        if checkpoint is not None and scope == SCOPE_ALL:
            state["census"].save(checkpoint)
        analysis_logger.log_search_progress(
            state["census"].scanned, total, len(state["census"].tallies)
        )

    run_sharded(_search_task, tasks, jobs, on_result=absorb)
    census = state["census"]
    return SearchResult(census.optimal(), census)


@dataclass(frozen=True)
class PerfectNonlinearCheck:
    """
    Comparison of the optimal set with the perfect nonlinear set over a scope.
    """

    n: int
    m: int
    r: int
    scope: str
    scanned: int
    optimal: FunctionClass
    optimal_count: int
    perfect_nonlinear_count: int
    equal: bool
    perfect_nonlinear_within_optimal: bool
    optimal_not_perfect_nonlinear: Tuple[int, ...]
    perfect_nonlinear_not_optimal: Tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "r": self.r,
            "scope": self.scope,
            "scanned": self.scanned,
            "optimal_count": self.optimal_count,
            "perfect_nonlinear_count": self.perfect_nonlinear_count,
            "equal": self.equal,
            "perfect_nonlinear_within_optimal": self.perfect_nonlinear_within_optimal,
            "optimal_not_perfect_nonlinear": [
                self.optimal.member_hex(v) for v in self.optimal_not_perfect_nonlinear
            ],
            "perfect_nonlinear_not_optimal": [
                self.optimal.member_hex(v) for v in self.perfect_nonlinear_not_optimal
            ],
        }


def compare_with_perfect_nonlinear(result: SearchResult, values: Sequence[int]) -> PerfectNonlinearCheck:
    """Set comparison of a search's optimal members with the PN members of `values`."""
    census = result.census
    optimal = set(census.optimal_members)
    perfect = set(perfect_nonlinear_members(values, census.n, census.m))
    max_examples = get_config().output.max_examples
    return PerfectNonlinearCheck(
        n=census.n,
        m=census.m,
        r=census.r,
        scope=census.scope,
        scanned=census.scanned,
        optimal=result.optimal,
        optimal_count=len(optimal),
        perfect_nonlinear_count=len(perfect),
        equal=optimal == perfect,
        perfect_nonlinear_within_optimal=perfect <= optimal,
        optimal_not_perfect_nonlinear=tuple(sorted(optimal - perfect)[:max_examples]),
        perfect_nonlinear_not_optimal=tuple(sorted(perfect - optimal)[:max_examples]),
    )


@log_operation("verify_optimal_equals_pn")
def verify_optimal_equals_pn(
    n: int,
    m: int,
    r: int,
    candidates: Optional[Iterable[Union[int, VectorialFunction]]] = None,
    jobs: Optional[int] = None,
) -> PerfectNonlinearCheck:
    """
    Check whether {optimal} = {perfect nonlinear} over all functions or a candidate list.

    Raises:
        ValidationError: Unless n is even and n >= 2m
        SpaceTooLargeError: If candidates is None and the full space is too large
    """
    if n % 2 or n < 2 * m:
        raise ValidationError(
            "perfect nonlinear functions need an even n >= 2m", field="n", value=(n, m)
        )
    if candidates is None:
        result = optimal_search(n, m, r, SCOPE_ALL, jobs=jobs)
        values = range(1 << (m * (1 << n)))
    else:
        values = select_candidates(candidates, n, m)
        result = optimal_search(n, m, r, SCOPE_FILTERED, candidates=values, jobs=jobs)
    return compare_with_perfect_nonlinear(result, values)


# =====================
# Output Files
# =====================


def write_census_jsonl(census: FunctionCensus, path: Union[str, Path]) -> Path:
    """One JSON line per function class, smallest first."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        for function_class in census.classes():
            f.write(json.dumps(function_class.to_dict()) + "\n")
    return path


def write_summary_json(
    result: SearchResult,
    path: Union[str, Path],
    check: Optional[PerfectNonlinearCheck] = None,
) -> Path:
    """Summary naming the optimal class and its member count."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    census = result.census
    summary = {
        "n": census.n,
        "m": census.m,
        "r": census.r,
        "scope": census.scope,
        "scanned": census.scanned,
        "classes": len(census.tallies),
        "optimal": result.optimal.to_dict(),
        "optimal_member_count": result.optimal.member_count,
        "perfect_nonlinear": check.to_dict() if check else None,
    }
    with open(path, "w", encoding="utf-8") as f:
        json.dump(summary, f, indent=2)
        f.write("\n")
    return path
