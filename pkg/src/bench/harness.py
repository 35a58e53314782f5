import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Sequence

from cache.strategy_config import StrategyConfig
from cache_engine import CacheEngine
from parsers.sexpr import ParseError
from parsers.smtlib_parser import to_formula
from parsers.suite_loader import Suite
from solvers.base import SolveStatus, SolverBackend, SolverCrash
from solvers.scripted_oracle import ManifestMiss
from strategies.base import ReuseOutcome, ReuseVerdict
from terms.term import substitution_holds
from .metrics import SuiteMetrics, average_timings

logger = logging.getLogger(__name__)

MODES = ('cachealot', 'utopia', 'nocache')

# Solver failures that resolve a single file as unknown instead of ending the run
SOLVE_FAILURES = (SolverCrash, ParseError, ManifestMiss)

# Optimisation versions compared by the ablation run
ABLATION_VERSIONS = (
    ('none', dict(o1=False, o2=False, o3=False)),
    ('O1', dict(o1=True, o2=False, o3=False)),
    ('O2', dict(o1=False, o2=True, o3=False)),
    ('O3', dict(o1=False, o2=False, o3=True)),
    ('O2+O3', dict(o1=False, o2=True, o3=True)),
    ('O1+O2+O3', dict(o1=True, o2=True, o3=True)),
)


@dataclass
class FileRecord:
    path: str
    status: str
    resolved_by: str
    outcome: Optional[str] = None
    core_id: Optional[int] = None
    substitution: Optional[Dict[str, str]] = None
    lookup_nanos: int = 0
    solve_nanos: int = 0
    candidates_selected: int = 0
    candidates_tested: int = 0
    join_rows_visited: int = 0
    join_rows_materialized: int = 0
    audit_status: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class AuditFinding:
    """A cache hit the audit could not confirm"""
    path: str
    core_id: int
    solver_status: str
    reason: str

    @property
    def unsound(self) -> bool:
        # an unknown audit verdict proves nothing either way
        return self.solver_status == SolveStatus.SAT.value or self.reason == 'substitution'

    def to_dict(self) -> Dict[str, Any]:
        return {**asdict(self), 'unsound': self.unsound}


@dataclass
class SuiteRun:
    metrics: SuiteMetrics
    mode: str
    config: StrategyConfig
    audit: bool = False
    records: List[FileRecord] = field(default_factory=list)
    findings: List[AuditFinding] = field(default_factory=list)

    @property
    def hit_paths(self) -> List[str]:
        return [r.path for r in self.records if r.resolved_by == 'cache']

    @property
    def unsound_findings(self) -> List[AuditFinding]:
        return [f for f in self.findings if f.unsound]

    def config_echo(self) -> Dict[str, Any]:
        return {'mode': self.mode, 'audit': self.audit, **self.config.to_dict()}


def _check_mode(mode: str):
    if mode not in MODES:
        raise ValueError(f"Unknown mode '{mode}', expected one of {', '.join(MODES)}")


def config_for_mode(config: StrategyConfig, mode: str) -> StrategyConfig:
    _check_mode(mode)
    return config if mode == 'nocache' else config.with_options(strategy=mode)


class SuiteRunner:
    """Replays one suite through the cache and the solver with a store of its own"""

    def __init__(self, solver: SolverBackend, config: StrategyConfig, mode: str = 'cachealot',
                 audit: bool = False, solver_timeout: Optional[float] = None):
        self.solver = solver
        self.mode = mode
        self.config = config_for_mode(config, mode)
        self.audit = audit and mode != 'nocache'
        self.solver_timeout = solver_timeout
        self.engine = CacheEngine(self.config)

    def run(self, suite: Suite) -> SuiteRun:
        self.engine.reset_store()
        run = SuiteRun(SuiteMetrics(suite.id), self.mode, self.config, self.audit)
        logger.info(f"Running suite {suite.id} ({len(suite)} files, mode {self.mode})")

        for index, query in enumerate(suite.files):
            formula = to_formula(query, index)
            run.metrics.formula_count += 1
            verdict = None
            if self.mode != 'nocache':
                verdict = self.engine.lookup(formula)
                self._count_lookup(run.metrics, verdict)
            if verdict is not None and verdict.is_hit:
                record = self._resolved_by_cache(run, formula, verdict)
            else:
                record = self._resolved_by_solver(run.metrics, formula, verdict)
            run.records.append(record)
            logger.debug(f"{record.path}: {record.status} via {record.resolved_by}")

        logger.info(
            f"Suite {suite.id}: {run.metrics.cache_hits} hits, "
            f"{run.metrics.unsat_reuse_ratio:.2f}% unsat reuse"
        )
        return run

    @staticmethod
    def _count_lookup(metrics: SuiteMetrics, verdict: ReuseVerdict):
        metrics.lookup_overhead_nanos += verdict.lookup_nanos
        metrics.candidates_selected += verdict.candidates_selected
        metrics.candidates_tested += verdict.candidates_tested
        if verdict.outcome is ReuseOutcome.TIMEOUT_MISS:
            metrics.timeout_misses += 1

    def _resolved_by_cache(self, run: SuiteRun, formula, verdict: ReuseVerdict) -> FileRecord:
        run.metrics.cache_hits += 1
        run.metrics.unsat_count += 1
        record = FileRecord(
            formula.origin, SolveStatus.UNSAT.value, 'cache', verdict.outcome.value, verdict.core_id,
            verdict.substitution.to_dict(), verdict.lookup_nanos,
            candidates_selected=verdict.candidates_selected, candidates_tested=verdict.candidates_tested,
            join_rows_visited=verdict.join_rows_visited,
            join_rows_materialized=verdict.join_rows_materialized,
        )
        if self.audit:
            self._audit_hit(run, formula, verdict, record)
        return record

    def _audit_hit(self, run: SuiteRun, formula, verdict: ReuseVerdict, record: FileRecord):
        entry = self.engine.store.get(verdict.core_id)
        if entry is None or not substitution_holds(entry.clauses, verdict.substitution, formula):
            run.findings.append(AuditFinding(formula.origin, verdict.core_id, 'n/a', 'substitution'))
        try:
            result = self.solver.solve(formula, self.solver_timeout)
        except SOLVE_FAILURES as e:
            logger.warning(f"{formula.origin}: audit solve failed: {e}")
            record.audit_status = 'error'
            return
        record.audit_status = result.status.value
        run.metrics.time_saved_nanos += result.solve_nanos
        if not result.is_unsat:
            logger.warning(f"{formula.origin}: cache hit on core {verdict.core_id} but solver says {result.status.value}")
            run.findings.append(AuditFinding(formula.origin, verdict.core_id, result.status.value, 'status'))

    def _resolved_by_solver(self, metrics: SuiteMetrics, formula, verdict: Optional[ReuseVerdict]) -> FileRecord:
        record = FileRecord(formula.origin, SolveStatus.UNKNOWN.value, 'solver')
        if verdict is not None:
            record.outcome = verdict.outcome.value
            record.lookup_nanos = verdict.lookup_nanos
            record.candidates_selected = verdict.candidates_selected
            record.candidates_tested = verdict.candidates_tested
            record.join_rows_visited = verdict.join_rows_visited
            record.join_rows_materialized = verdict.join_rows_materialized
        try:
            result = self.solver.solve(formula, self.solver_timeout)
        except SOLVE_FAILURES as e:
            logger.warning(f"{formula.origin}: {e}")
            metrics.unknown_count += 1
            record.resolved_by = 'error'
            return record

        record.status = result.status.value
        record.solve_nanos = result.solve_nanos
        metrics.solver_nanos += result.solve_nanos
        if result.status is SolveStatus.SAT:
            metrics.sat_count += 1
        elif result.status is SolveStatus.UNSAT:
            metrics.unsat_count += 1
            metrics.unsat_solver_nanos += result.solve_nanos
            if self.mode != 'nocache':
                core = [formula.clauses[i] for i in sorted(result.core)]
                record.core_id = self.engine.insert_core(core, formula.origin)
        else:
            metrics.unknown_count += 1
        return record


def run_suite(suite: Suite, solver: SolverBackend, config: StrategyConfig, mode: str = 'cachealot',
              solver_timeout: Optional[float] = None) -> SuiteRun:
    return SuiteRunner(solver, config, mode, False, solver_timeout).run(suite)


def run_audit(suite: Suite, solver: SolverBackend, config: StrategyConfig, mode: str = 'cachealot',
              solver_timeout: Optional[float] = None) -> SuiteRun:
    """run_suite that also solves every cache hit to confirm it and to measure the time it saved"""
    return SuiteRunner(solver, config, mode, True, solver_timeout).run(suite)


def run_repeated(suite: Suite, solver: SolverBackend, config: StrategyConfig, mode: str = 'cachealot',
                 audit: bool = False, repeat: int = 1, solver_timeout: Optional[float] = None) -> SuiteRun:
    """Replay a suite with a fresh store each time; timing fields are averaged"""
    if repeat < 1:
        raise ValueError(f"repeat must be at least 1, got {repeat}")
    runs = [SuiteRunner(solver, config, mode, audit, solver_timeout).run(suite) for _ in range(repeat)]
    first = runs[0]
    for other in runs[1:]:
        if other.metrics.verdict_fields() != first.metrics.verdict_fields():
            logger.warning(f"Suite {suite.id}: verdict counters differ between repetitions")
    first.metrics = average_timings([r.metrics for r in runs])
    return first


def run_suites(suites: Sequence[Suite], solver: SolverBackend, config: StrategyConfig, mode: str = 'cachealot',
               audit: bool = False, repeat: int = 1, solver_timeout: Optional[float] = None,
               parallel: bool = False, max_workers: int = 4) -> List[SuiteRun]:
    """Run several suites, each with an independent store; results keep the input order"""
    def one(suite: Suite) -> SuiteRun:
        return run_repeated(suite, solver, config, mode, audit, repeat, solver_timeout)

    if parallel and len(suites) > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            return list(pool.map(one, suites))
    return [one(suite) for suite in suites]


def run_ablation(suite: Suite, solver: SolverBackend, config: StrategyConfig,
                 solver_timeout: Optional[float] = None) -> List[Dict[str, Any]]:
    """The cachealot strategy under each optimisation version on the same suite"""
    rows = []
    for label, flags in ABLATION_VERSIONS:
        run = run_suite(suite, solver, config.with_options(**flags), 'cachealot', solver_timeout)
        rows.append({
            'version': label,
            'cache_hits': run.metrics.cache_hits,
            'timeout_misses': run.metrics.timeout_misses,
            'lookup_overhead_ms': run.metrics.lookup_overhead_nanos / 1e6,
            'unsat_reuse_ratio': run.metrics.unsat_reuse_ratio,
        })
    return rows
