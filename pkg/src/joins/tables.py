import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from fingerprint.hashing import ClauseBuckets, clause_hash
from terms.term import Clause, Formula, Substitution, Variable
from unification.unifier import unify_many

logger = logging.getLogger(__name__)

Row = Tuple[Variable, ...]


@dataclass(frozen=True)
class SubstitutionTable:
    """Unifying substitutions of one core clause: one column per core variable"""
    columns: Tuple[Variable, ...]
    rows: Tuple[Row, ...]
    source_clause_index: int

    def __len__(self) -> int:
        return len(self.rows)

    def column_values(self, var: Variable) -> FrozenSet[Variable]:
        position = self.columns.index(var)
        return frozenset(row[position] for row in self.rows)

    def row_substitution(self, row: Row) -> Substitution:
        return Substitution(dict(zip(self.columns, row)))

    def as_substitutions(self) -> List[Substitution]:
        return [self.row_substitution(row) for row in self.rows]

    def with_rows(self, rows: Sequence[Row]) -> 'SubstitutionTable':
        return SubstitutionTable(self.columns, tuple(rows), self.source_clause_index)


@dataclass(frozen=True)
class VariableDomain:
    """Admissible formula variables per core variable"""
    per_variable: Dict[Variable, FrozenSet[Variable]]

    def get(self, var: Variable) -> FrozenSet[Variable]:
        return self.per_variable.get(var, frozenset())


def table_from_substitutions(clause: Clause, index: int, substitutions: Sequence[Substitution]) -> SubstitutionTable:
    columns = clause.free_vars
    rows = dict.fromkeys(tuple(s[c] for c in columns) for s in substitutions)
    return SubstitutionTable(columns, tuple(rows), index)


def build_tables(core: Sequence[Clause], formula: Formula,
                 buckets: Optional[ClauseBuckets] = None) -> Optional[List[SubstitutionTable]]:
    """
    One table per core clause, rows gathered by unification against the formula.

    With buckets only formula clauses sharing the core clause's hash are tried.
    Returns None (no match) as soon as some core clause has no unifier.
    """
    tables = []
    for index, clause in enumerate(core):
        if buckets is not None:
            candidates = [formula.clauses[i] for i in buckets.get(clause_hash(clause))]
        else:
            candidates = formula.clauses
        matches = unify_many(clause, candidates)
        if not matches:
            logger.debug(f"Core clause {index} has no unifier in {formula.origin}")
            return None
        tables.append(table_from_substitutions(clause, index, [s for _, s in matches]))
    return tables


def compute_domains(tables: Sequence[SubstitutionTable]) -> VariableDomain:
    domains: Dict[Variable, FrozenSet[Variable]] = {}
    for table in tables:
        for var in table.columns:
            values = table.column_values(var)
            domains[var] = domains[var] & values if var in domains else values
    return VariableDomain(domains)


def filter_invalid(tables: Sequence[SubstitutionTable]) -> Optional[Tuple[List[SubstitutionTable], VariableDomain]]:
    """
    Drop rows that use a value outside the per-variable domain intersection.

    Repeats until no row is removed, since deleting rows can shrink domains.
    Returns None when a domain or a table becomes empty.
    """
    current = list(tables)
    while True:
        domain = compute_domains(current)
        if any(not values for values in domain.per_variable.values()):
            return None
        changed = False
        filtered = []
        for table in current:
            allowed = [domain.get(var) for var in table.columns]
            rows = [row for row in table.rows if all(v in ok for v, ok in zip(row, allowed))]
            if not rows:
                return None
            if len(rows) != len(table.rows):
                changed = True
                filtered.append(table.with_rows(rows))
            else:
                filtered.append(table)
        current = filtered
        if not changed:
            return current, domain
