"""
Built-in reference functions and their published parameter tables.

TABLE_1 holds the r = 1..4 rows of the five-variable example function and
TABLE_2 the r = 1..7 rows of the 4-bit inversion S-box over GF(2^4) with
modulus x^4 + x + 1. Integers are compared exactly, entropies within the
configured tolerance.
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .config import get_config
from .core import BooleanFunction, VectorialFunction, anf_to_function, gf_inverse_sbox, parse_anf
from .exceptions import ValidationError
from .logging import get_logger
from .nonlinearity import NonlinearityReport, analyze

EXAMPLE_ANF = "x1*x2*x3 + x1*x2*x4 + x1*x2*x5 + x1*x4 + x2*x5 + x3 + x4 + x5"
EXAMPLE_ARITY = 5

SBOX_DEGREE = 4
SBOX_MODULUS = 0x13


def example_boolean_function() -> BooleanFunction:
    """The five-variable example function of weight 16."""
    return anf_to_function(parse_anf(EXAMPLE_ANF, EXAMPLE_ARITY))


def example_inverse_sbox() -> VectorialFunction:
    return gf_inverse_sbox(SBOX_DEGREE, SBOX_MODULUS)


def _expand(*runs: Tuple[int, int]) -> Tuple[int, ...]:
    """Count multiset from (count, repetitions) runs, descending."""
    return tuple(count for count, times in runs for _ in range(times))


@dataclass(frozen=True)
class ReferenceRow:
    """
    One published row.

    Args:
        counts: Count multiset of q over the common denominator, descending
    """

    r: int
    u: int
    c: int
    n_f: int
    h_f: float
    t_q: int
    counts: Tuple[int, ...]


TABLE_1: Tuple[ReferenceRow, ...] = (
    ReferenceRow(1, 31, 2, 0, 0.95441, 16, (10, 6)),
    ReferenceRow(2, 155, 5, 0, 1.82320, 8, (5, 5, 5, 1)),
    ReferenceRow(3, 155, 7, 1, 2.65563, 12, (4, 3, 3, 2, 2, 1, 1, 0)),
    ReferenceRow(4, 31, 3, 6, 3.2500, 1, _expand((2, 6), (1, 4), (0, 6))),
)

TABLE_2: Tuple[ReferenceRow, ...] = (
    ReferenceRow(1, 255, 3, 0, 0.8112, 30, (12, 4)),
    ReferenceRow(2, 10795, 12, 1, 1.5, 135, (8, 4, 4, 0)),
    ReferenceRow(3, 97155, 35, 3, 2.0, 15, _expand((8, 1), (2, 4), (0, 3))),
    ReferenceRow(4, 200787, 49, 10, 2.4056, 3, _expand((6, 1), (2, 5), (0, 10))),
    ReferenceRow(5, 97155, 21, 23, 3.0, 30, _expand((4, 1), (2, 4), (1, 4), (0, 23))),
    ReferenceRow(6, 10795, 9, 52, 3.4528, 90, _expand((3, 1), (2, 2), (1, 9), (0, 52))),
    ReferenceRow(7, 255, 3, 114, 3.75, 15, _expand((2, 2), (1, 12), (0, 114))),
)

TABLES: Dict[int, Tuple[ReferenceRow, ...]] = {1: TABLE_1, 2: TABLE_2}


def reference_function(table: int) -> Union[BooleanFunction, VectorialFunction]:
    if table not in TABLES:
        raise ValidationError(
            f"unknown reference table {table}", field="table", value=table, expected=sorted(TABLES)
        )
    return example_boolean_function() if table == 1 else example_inverse_sbox()


@dataclass(frozen=True)
class CellCheck:
    r: int
    column: str
    expected: object
    actual: object
    passed: bool

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "column": self.column,
            "expected": self.expected,
            "actual": self.actual,
            "status": "PASS" if self.passed else "FAIL",
        }


def check_report(
    report: NonlinearityReport, row: ReferenceRow, tolerance: Optional[float] = None
) -> List[CellCheck]:
    """
    Compare a report with a reference row cell by cell.

    u, c, N_f, T_q and the count multiset must match exactly; H_f within
    `tolerance`.
    """
    tolerance = get_config().output.table_tolerance if tolerance is None else tolerance
    exact = [
        ("u", row.u, report.u),
        ("c", row.c, report.c),
        ("N_f", row.n_f, report.n_f),
        ("T_q", row.t_q, report.t_q),
        ("q", list(row.counts), sorted(report.q.counts, reverse=True)),
    ]
    checks = [CellCheck(row.r, column, want, got, want == got) for column, want, got in exact]
    checks.append(
        CellCheck(
            row.r,
            "H_f",
            row.h_f,
            round(report.h_f, get_config().output.entropy_decimals),
            abs(report.h_f - row.h_f) <= tolerance,
        )
    )
    return checks


@dataclass(frozen=True)
class TableReproduction:
    table: int
    reports: Tuple[NonlinearityReport, ...]
    checks: Tuple[CellCheck, ...]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failures(self) -> List[CellCheck]:
        return [check for check in self.checks if not check.passed]

    def rows(self) -> List[Tuple[int, bool]]:
        """(r, all cells passed) per reference row."""
        by_rank: Dict[int, bool] = {}
        for check in self.checks:
            by_rank[check.r] = by_rank.get(check.r, True) and check.passed
        return sorted(by_rank.items())


def reproduce_table(
    table: int, jobs: Optional[int] = None, ranks: Optional[Sequence[int]] = None
) -> TableReproduction:
    """
    Recompute a reference table and check every cell.

    Args:
        table: 1 or 2
        jobs: Worker processes
        ranks: Subset of the table's r values (all rows by default)
    """
    function = reference_function(table)
    rows = [row for row in TABLES[table] if ranks is None or row.r in ranks]
    reports = []
    checks: List[CellCheck] = []
    for row in rows:
        report = analyze(function, row.r, jobs)
        reports.append(report)
        checks.extend(check_report(report, row))

    result = TableReproduction(table, tuple(reports), tuple(checks))
    get_logger().info(
        "Reference table reproduced",
        operation="reproduce",
        table=table,
        rows=len(rows),
        failures=len(result.failures),
    )
    return result
