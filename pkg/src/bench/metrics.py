from dataclasses import asdict, dataclass, fields
from typing import Any, Dict, List, Sequence

TIMING_FIELDS = ('lookup_overhead_nanos', 'solver_nanos', 'unsat_solver_nanos', 'time_saved_nanos',
                 'time_saved_on_unsat_ratio')


def percent(part: float, whole: float) -> float:
    return 100.0 * part / whole if whole else 0.0


@dataclass
class SuiteMetrics:
    """
    Per-suite counters and the derived ratios.

    unsat_reuse_ratio divides cache hits by every formula whose final status is
    unsat (cache hits included); all_formulae_reuse_ratio divides by the whole
    suite. Time saved is only known when hits were audited.
    """
    suite_id: str
    formula_count: int = 0
    sat_count: int = 0
    unsat_count: int = 0
    unknown_count: int = 0
    cache_hits: int = 0
    timeout_misses: int = 0
    candidates_selected: int = 0
    candidates_tested: int = 0
    lookup_overhead_nanos: int = 0
    solver_nanos: int = 0
    unsat_solver_nanos: int = 0
    time_saved_nanos: int = 0

    @property
    def unsat_reuse_ratio(self) -> float:
        return percent(self.cache_hits, self.unsat_count)

    @property
    def all_formulae_reuse_ratio(self) -> float:
        return percent(self.cache_hits, self.formula_count)

    @property
    def time_saved_on_unsat_ratio(self) -> float:
        return percent(self.time_saved_nanos, self.unsat_solver_nanos + self.time_saved_nanos)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data['unsat_reuse_ratio'] = round(self.unsat_reuse_ratio, 4)
        data['all_formulae_reuse_ratio'] = round(self.all_formulae_reuse_ratio, 4)
        data['time_saved_on_unsat_ratio'] = round(self.time_saved_on_unsat_ratio, 4)
        return data

    def verdict_fields(self) -> Dict[str, Any]:
        """Fields that must not change between runs with the same inputs"""
        return {k: v for k, v in self.to_dict().items() if k not in TIMING_FIELDS}


METRIC_COLUMNS: List[str] = [f.name for f in fields(SuiteMetrics)] + [
    'unsat_reuse_ratio', 'all_formulae_reuse_ratio', 'time_saved_on_unsat_ratio',
]


def average_timings(runs: Sequence[SuiteMetrics]) -> SuiteMetrics:
    """First run's counters with timing fields averaged over all runs"""
    if not runs:
        raise ValueError("Nothing to average")
    merged = SuiteMetrics(**asdict(runs[0]))
    for name in ('lookup_overhead_nanos', 'solver_nanos', 'unsat_solver_nanos', 'time_saved_nanos'):
        setattr(merged, name, sum(getattr(r, name) for r in runs) // len(runs))
    return merged
