import logging
from typing import Optional

from cache.store import UnsatCoreEntry
from cache.strategy_config import StrategyConfig
from joins.join import first_full_join_row, join_lazy
from joins.tables import build_tables, filter_invalid
from terms.term import Substitution
from utils.deadline import Deadline
from .base import FormulaContext, TestingStrategy

logger = logging.getLogger(__name__)


class CachealotStrategy(TestingStrategy):
    """Substitution search: unify clause pairs into tables, then join the tables"""

    def __init__(self):
        super().__init__('cachealot')

    def test(self, entry: UnsatCoreEntry, context: FormulaContext, cfg: StrategyConfig,
             deadline: Deadline) -> Optional[Substitution]:
        if cfg.canonize:
            core, formula = entry.canonical_clauses, context.canonical
            buckets = context.canonical_buckets if cfg.o1 else None
        else:
            core, formula = entry.clauses, context.formula
            buckets = context.buckets if cfg.o1 else None

        tables = build_tables(core, formula, buckets)
        if tables is None:
            return None
        if cfg.o2:
            filtered = filter_invalid(tables)
            if filtered is None:
                logger.debug(f"Core {entry.id}: domain filtering emptied a table")
                return None
            tables = filtered[0]

        if cfg.o3:
            substitution = join_lazy(tables, deadline, context.join_stats)
        else:
            substitution = first_full_join_row(tables, deadline, context.join_stats)
        if substitution is None:
            return None
        if cfg.canonize:
            return context.from_canonical(entry, substitution)
        return substitution
