import logging
import time
from typing import List, Optional, Sequence

from cache.store import CoreStore, UnsatCoreEntry
from cache.strategy_config import StrategyConfig
from fingerprint.bloom import bloom_subset
from joins.join import JoinTimeout
from strategies.base import FormulaContext, ReuseOutcome, ReuseVerdict, TestingStrategy
from strategies.cachealot import CachealotStrategy
from strategies.utopia import UtopiaStrategy
from terms.term import Clause, Formula, Substitution, substitution_holds
from utils.deadline import Deadline

logger = logging.getLogger(__name__)


class CacheEngine:

    def __init__(self, config: Optional[StrategyConfig] = None, store: Optional[CoreStore] = None):
        self.config = config or StrategyConfig()
        self.store = store if store is not None else CoreStore(self.config.bloom_bits)
        if self.store.bloom_bits != self.config.bloom_bits:
            raise ValueError(
                f"Store uses {self.store.bloom_bits}-bit Bloom bits, config asks for {self.config.bloom_bits}"
            )

        # Initialize strategies
        self.strategies = {
            'cachealot': CachealotStrategy(),
            'utopia': UtopiaStrategy(),
        }

    @property
    def strategy(self) -> TestingStrategy:
        return self.strategies[self.config.strategy]

    def insert_core(self, clauses: Sequence[Clause], origin: str = '') -> int:
        return self.store.insert_core(clauses, origin)

    def reset_store(self):
        self.store.reset()

    def select_candidates(self, formula: Formula, context: Optional[FormulaContext] = None) -> List[UnsatCoreEntry]:
        """Stored cores whose Bloom bits fit inside the formula's, in ascending id order"""
        context = context or FormulaContext(formula, self.config.bloom_bits)
        return [entry for entry in self.store.snapshot() if bloom_subset(entry.bloom, context.bloom)]

    def test_candidate(self, entry: UnsatCoreEntry, formula: Formula, deadline: Optional[Deadline] = None,
                       context: Optional[FormulaContext] = None) -> Optional[Substitution]:
        """Run the configured strategy on one candidate; raises JoinTimeout on deadline expiry"""
        context = context or FormulaContext(formula, self.config.bloom_bits)
        return self.strategy.test(entry, context, self.config, deadline or Deadline.never())

    def lookup(self, formula: Formula) -> ReuseVerdict:
        """
        Look up a formula in the store

        Args:
            formula: Conjunctive formula about to be solved

        Returns:
            ReuseVerdict: HIT_UNSAT with the matching core and substitution, MISS,
            or TIMEOUT_MISS when the deadline expired while testing candidates
        """
        start = time.perf_counter_ns()
        deadline = Deadline.from_millis(self.config.lookup_deadline_ms)
        context = FormulaContext(formula, self.config.bloom_bits)
        candidates = self.select_candidates(formula, context)
        verdict = ReuseVerdict(ReuseOutcome.MISS, candidates_selected=len(candidates))

        for entry in candidates:
            if deadline.expired():
                verdict.outcome = ReuseOutcome.TIMEOUT_MISS
                break
            verdict.candidates_tested += 1
            try:
                substitution = self.strategy.test(entry, context, self.config, deadline)
            except JoinTimeout as e:
                logger.debug(f"{formula.origin}: {e}")
                verdict.outcome = ReuseOutcome.TIMEOUT_MISS
                break
            if substitution is None:
                logger.debug(f"{formula.origin}: core {entry.id} does not apply")
                continue
            if not substitution_holds(entry.clauses, substitution, formula):
                logger.warning(f"{formula.origin}: rejected unverifiable match with core {entry.id}")
                continue
            verdict.outcome = ReuseOutcome.HIT_UNSAT
            verdict.core_id = entry.id
            verdict.substitution = substitution
            break

        verdict.join_rows_visited = context.join_stats.visited
        verdict.join_rows_materialized = context.join_stats.materialized
        verdict.lookup_nanos = time.perf_counter_ns() - start
        return verdict
