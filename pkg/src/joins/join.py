import logging
from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from terms.term import Substitution, Variable
from utils.deadline import Deadline
from .tables import Row, SubstitutionTable

logger = logging.getLogger(__name__)


class JoinTimeout(Exception):
    """The lookup deadline expired while joining substitution tables"""


@dataclass
class JoinStats:
    visited: int = 0
    materialized: int = 0
    peak_rows: int = 0

    def observe(self, live_rows: int):
        if live_rows > self.peak_rows:
            self.peak_rows = live_rows


def _key(row: Row, positions: Sequence[int]) -> Tuple[Variable, ...]:
    return tuple(row[i] for i in positions)


@dataclass
class _Step:
    table: SubstitutionTable
    key_columns: Tuple[Variable, ...]
    new_columns: Tuple[Tuple[int, Variable], ...]
    index: Dict[Tuple[Variable, ...], List[Row]]


def _plan(tables: Sequence[SubstitutionTable]) -> List[_Step]:
    """Order tables by size and index each on the columns earlier tables bind"""
    ordered = sorted(tables, key=lambda t: (len(t.rows), t.source_clause_index))
    assigned = set()
    steps = []
    for table in ordered:
        key_positions = [i for i, c in enumerate(table.columns) if c in assigned]
        index: Dict[Tuple[Variable, ...], List[Row]] = defaultdict(list)
        for row in table.rows:
            index[_key(row, key_positions)].append(row)
        steps.append(_Step(
            table,
            tuple(table.columns[i] for i in key_positions),
            tuple((i, c) for i, c in enumerate(table.columns) if c not in assigned),
            dict(index),
        ))
        assigned.update(table.columns)
    return steps


def join_lazy(tables: Sequence[SubstitutionTable], deadline: Optional[Deadline] = None,
              stats: Optional[JoinStats] = None) -> Optional[Substitution]:
    """
    First row of the natural join, found by depth-first backtracking.

    Holds one partial assignment and one row iterator per table. Raises
    JoinTimeout when the deadline expires before a row extension.
    """
    if not tables:
        raise ValueError("join_lazy needs at least one table")
    deadline = deadline or Deadline.never()
    stats = stats if stats is not None else JoinStats()
    steps = _plan(tables)
    assignment: Dict[Variable, Variable] = {}

    def candidates(depth: int):
        step = steps[depth]
        return iter(step.index.get(tuple(assignment[c] for c in step.key_columns), ()))

    iterators = [candidates(0)]
    while iterators:
        depth = len(iterators) - 1
        step = steps[depth]
        if deadline.expired():
            raise JoinTimeout(f"Lazy join timed out at depth {depth} after {stats.visited} rows")
        row = next(iterators[-1], None)
        if row is None:
            iterators.pop()
            for _, column in step.new_columns:
                assignment.pop(column, None)
            continue
        stats.visited += 1
        for position, column in step.new_columns:
            assignment[column] = row[position]
        if depth == len(steps) - 1:
            return Substitution(assignment)
        iterators.append(candidates(depth + 1))
        stats.observe(len(iterators))
    return None


def join_full(tables: Sequence[SubstitutionTable], deadline: Optional[Deadline] = None,
              stats: Optional[JoinStats] = None) -> SubstitutionTable:
    """Materialize the complete natural join of the tables, in the given order"""
    if not tables:
        raise ValueError("join_full needs at least one table")
    deadline = deadline or Deadline.never()
    stats = stats if stats is not None else JoinStats()

    columns = list(tables[0].columns)
    rows: List[Row] = list(tables[0].rows)
    stats.materialized += len(rows)
    stats.observe(len(rows))
    for table in tables[1:]:
        shared = [c for c in table.columns if c in columns]
        left_positions = [columns.index(c) for c in shared]
        right_positions = [table.columns.index(c) for c in shared]
        extra_positions = [i for i, c in enumerate(table.columns) if c not in columns]

        index: Dict[Tuple[Variable, ...], List[Row]] = defaultdict(list)
        for row in table.rows:
            index[_key(row, right_positions)].append(row)

        joined: List[Row] = []
        for left in rows:
            for right in index.get(_key(left, left_positions), ()):
                if deadline.expired():
                    raise JoinTimeout(f"Full join timed out after materializing {stats.materialized} rows")
                joined.append(left + _key(right, extra_positions))
        columns.extend(table.columns[i] for i in extra_positions)
        rows = joined
        stats.materialized += len(rows)
        stats.observe(len(rows))
        if not rows:
            break
    return SubstitutionTable(tuple(columns), tuple(rows), -1)


def first_full_join_row(tables: Sequence[SubstitutionTable], deadline: Optional[Deadline] = None,
                        stats: Optional[JoinStats] = None) -> Optional[Substitution]:
    """Complete substitution taken from the materialized join (the unoptimized search)"""
    result = join_full(tables, deadline, stats)
    if not result.rows:
        return None
    return result.row_substitution(result.rows[0])
