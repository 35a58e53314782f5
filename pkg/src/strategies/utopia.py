from typing import Optional

from cache.store import UnsatCoreEntry
from cache.strategy_config import StrategyConfig
from terms.term import Substitution
from utils.deadline import Deadline
from .base import FormulaContext, TestingStrategy


class UtopiaStrategy(TestingStrategy):
    """
    Footprint-style containment: every core clause must occur verbatim in the formula.

    With canonization both sides are renamed by first occurrence before the
    comparison, so the match depends on clause order rather than on a search.
    """

    def __init__(self):
        super().__init__('utopia')

    def test(self, entry: UnsatCoreEntry, context: FormulaContext, cfg: StrategyConfig,
             deadline: Deadline) -> Optional[Substitution]:
        if cfg.canonize:
            keys = context.canonical.clause_keys
            if all(c.key in keys for c in entry.canonical_clauses):
                return context.from_canonical(entry, Substitution())
            return None

        keys = context.formula.clause_keys
        if all(c.key in keys for c in entry.clauses):
            return Substitution.identity(entry.free_vars)
        return None
