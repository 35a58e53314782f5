from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Any, Dict, Optional

from cache.canonization import canonize_clauses
from cache.store import UnsatCoreEntry
from cache.strategy_config import StrategyConfig
from fingerprint.bloom import BloomBits, to_bloom_bits
from fingerprint.hashing import ClauseBuckets, HashFootprint, compute_formula_hash_footprint
from joins.join import JoinStats
from terms.term import Formula, Substitution, compose
from utils.deadline import Deadline


class ReuseOutcome(Enum):
    HIT_UNSAT = 'hit_unsat'
    MISS = 'miss'
    TIMEOUT_MISS = 'timeout_miss'


@dataclass
class ReuseVerdict:
    """Container for the result of one cache lookup"""
    outcome: ReuseOutcome
    core_id: Optional[int] = None
    substitution: Optional[Substitution] = None
    lookup_nanos: int = 0
    candidates_selected: int = 0
    candidates_tested: int = 0
    join_rows_visited: int = 0
    join_rows_materialized: int = 0

    @property
    def is_hit(self) -> bool:
        return self.outcome is ReuseOutcome.HIT_UNSAT

    def to_dict(self) -> Dict[str, Any]:
        """Convert verdict to dictionary"""
        return {
            'outcome': self.outcome.value,
            'core_id': self.core_id,
            'substitution': self.substitution.to_dict() if self.substitution is not None else None,
            'lookup_nanos': self.lookup_nanos,
            'candidates_selected': self.candidates_selected,
            'candidates_tested': self.candidates_tested,
            'join_rows_visited': self.join_rows_visited,
            'join_rows_materialized': self.join_rows_materialized,
        }


class FormulaContext:
    """Per-lookup views of the formula, computed at most once and shared by all candidates"""

    def __init__(self, formula: Formula, bloom_bits: int):
        self.formula = formula
        self.bloom_bits = bloom_bits
        # join work across every candidate of this lookup
        self.join_stats = JoinStats()

    @cached_property
    def footprint(self) -> HashFootprint:
        return compute_formula_hash_footprint(self.formula)

    @cached_property
    def bloom(self) -> BloomBits:
        return to_bloom_bits(self.footprint, self.bloom_bits)

    @cached_property
    def buckets(self) -> ClauseBuckets:
        return ClauseBuckets(self.formula)

    @cached_property
    def _canonical(self):
        clauses, renaming = canonize_clauses(self.formula.clauses)
        return Formula(clauses, self.formula.origin, self.formula.index), renaming

    @property
    def canonical(self) -> Formula:
        return self._canonical[0]

    @cached_property
    def canonical_inverse(self) -> Substitution:
        return self._canonical[1].inverse()

    @cached_property
    def canonical_buckets(self) -> ClauseBuckets:
        return ClauseBuckets(self.canonical)

    def from_canonical(self, entry: UnsatCoreEntry, canonical_substitution: Substitution) -> Substitution:
        """Carry a substitution between canonical spaces back to the caller's variable names"""
        through_core = compose(canonical_substitution, entry.canonical_renaming)
        return compose(self.canonical_inverse, through_core).restrict(entry.free_vars)


class TestingStrategy(ABC):
    """Base class for candidate testing strategies"""

    __test__ = False

    def __init__(self, name: str):
        self.name = name

    @abstractmethod
    def test(self, entry: UnsatCoreEntry, context: FormulaContext, cfg: StrategyConfig,
             deadline: Deadline) -> Optional[Substitution]:
        """
        Decide whether a stored core is contained in the formula up to renaming

        Args:
            entry: Candidate core that passed Bloom selection
            context: The formula being looked up, with its derived views
            cfg: Cache configuration
            deadline: Budget shared with the rest of the lookup

        Returns:
            Substitution over the core's variables, or None when the core does not apply
        """
        pass
