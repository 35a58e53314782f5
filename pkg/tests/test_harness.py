import unittest
import csv
import json
import sys
import tempfile
from pathlib import Path

# Add src to path
sys.path.append(str(Path(__file__).parent.parent / "src"))

from bench.generator import MANIFEST_NAME, GeneratorParams, generate_files, generate_synthetic_suite
from bench.harness import (ABLATION_VERSIONS, AuditFinding, SuiteRunner, run_ablation, run_audit, run_repeated,
                           run_suite, run_suites)
from bench.metrics import SuiteMetrics, average_timings
from cache.strategy_config import StrategyConfig
from parsers.smtlib_parser import parse_query_file, to_formula
from parsers.suite_loader import load_suite
from reporters.suite_reporter import CSV_HEADER, emit_report
from solvers.base import SolverBackend, SolverCrash
from solvers.process_solver import ProcessSolver
from solvers.scripted_oracle import ScriptedOracle
from terms.term import Variable, substitution_holds

SUITES = Path(__file__).parent.parent / "suites"
CYCLE_SOLUTIONS = [
    {'x': 'b', 'y': 'c', 'z': 'd'},
    {'x': 'c', 'y': 'd', 'z': 'b'},
    {'x': 'd', 'y': 'b', 'z': 'c'},
]
SEEDS = (1, 2, 3, 4, 5)
FAKE_SOLVER = Path(__file__).parent / "fixtures" / "fake_solver.py"


def bundled(name: str):
    return load_suite(SUITES / name), ScriptedOracle.from_file(SUITES / name / MANIFEST_NAME)


class CrashingSolver(SolverBackend):

    def __init__(self):
        super().__init__('crashing')

    def solve(self, formula, timeout=None):
        raise SolverCrash(139, 'killed')


class TestMotivatingSuites(unittest.TestCase):

    def test_cachealot_reuses_eq1_core_for_eq3(self):
        """Test that the second file of the motivating pair is answered from the first one's core"""
        suite, oracle = bundled('eq1-eq3')
        run = run_suite(suite, oracle, StrategyConfig())
        metrics = run.metrics
        self.assertEqual((metrics.formula_count, metrics.cache_hits, metrics.unsat_count), (2, 1, 2))
        self.assertEqual(metrics.unsat_reuse_ratio, 50.0)
        self.assertEqual(run.hit_paths, ['02_eq3.smt2'])
        self.assertIn(run.records[1].substitution, CYCLE_SOLUTIONS)
        self.assertEqual(run.records[0].core_id, 0)

    def test_canonized_utopia_misses_eq3(self):
        suite, oracle = bundled('eq1-eq3')
        run = run_suite(suite, oracle, StrategyConfig(canonize=True), 'utopia')
        self.assertEqual(run.metrics.cache_hits, 0)
        self.assertEqual(run.metrics.unsat_count, 2)

    def test_canonized_utopia_hits_eq2(self):
        suite, oracle = bundled('eq1-eq2')
        run = run_suite(suite, oracle, StrategyConfig(canonize=True), 'utopia')
        self.assertEqual(run.hit_paths, ['02_eq2.smt2'])
        self.assertEqual(run.records[1].substitution, {'x': 'b', 'y': 'c', 'z': 'd'})

    def test_nocache_solves_everything(self):
        suite, oracle = bundled('eq1-eq3')
        run = run_audit(suite, oracle, StrategyConfig(), 'nocache')
        self.assertEqual(run.metrics.cache_hits, 0)
        self.assertEqual(run.metrics.solver_nanos, 9000000)
        self.assertFalse(run.audit)
        self.assertEqual(run.findings, [])

    def test_audit_confirms_hit(self):
        suite, oracle = bundled('eq1-eq3')
        run = run_audit(suite, oracle, StrategyConfig())
        self.assertEqual(run.findings, [])
        self.assertEqual(run.metrics.time_saved_nanos, 5000000)
        self.assertEqual(run.metrics.unsat_solver_nanos, 4000000)
        self.assertAlmostEqual(run.metrics.time_saved_on_unsat_ratio, 100.0 * 5 / 9)
        self.assertEqual(run.records[1].audit_status, 'unsat')

    def test_audit_reports_unsound_hit(self):
        suite, _ = bundled('eq1-eq3')
        oracle = ScriptedOracle({
            '01_eq1.smt2': {'status': 'unsat', 'core': [0, 1, 2]},
            '02_eq3.smt2': {'status': 'sat'},
        })
        run = run_audit(suite, oracle, StrategyConfig())
        self.assertEqual(len(run.unsound_findings), 1)
        self.assertEqual(run.findings[0].reason, 'status')

    def test_unknown_audit_verdict_is_not_unsound(self):
        finding = AuditFinding('a.smt2', 0, 'unknown', 'status')
        self.assertFalse(finding.unsound)
        self.assertTrue(AuditFinding('a.smt2', 0, 'n/a', 'substitution').unsound)
        self.assertTrue(finding.to_dict()['unsound'] is False)

    def test_solver_crash_counts_as_unknown(self):
        """Test that a crashing solver leaves the run going"""
        suite, _ = bundled('eq1-eq3')
        run = run_suite(suite, CrashingSolver(), StrategyConfig())
        self.assertEqual(run.metrics.unknown_count, 2)
        self.assertEqual([r.resolved_by for r in run.records], ['error', 'error'])

    def test_unparseable_solver_output_counts_as_unknown(self):
        suite, _ = bundled('eq1-eq3')
        solver = ProcessSolver(f'"{sys.executable}" "{FAKE_SOLVER}" --garbage')
        run = run_suite(suite, solver, StrategyConfig())
        self.assertEqual(run.metrics.unknown_count, 2)
        self.assertEqual([r.resolved_by for r in run.records], ['error', 'error'])

    def test_manifest_miss_counts_as_unknown(self):
        """Test that a file missing from the manifest does not end the run"""
        suite, _ = bundled('eq1-eq3')
        oracle = ScriptedOracle({'02_eq3.smt2': {'status': 'unsat', 'core': [0, 1, 2]}})
        run = run_suite(suite, oracle, StrategyConfig())
        self.assertEqual([r.resolved_by for r in run.records], ['error', 'solver'])
        self.assertEqual((run.metrics.unknown_count, run.metrics.unsat_count), (1, 1))

    def test_audit_manifest_miss_marks_the_hit(self):
        suite, oracle = bundled('eq1-eq3')
        partial = ScriptedOracle({'01_eq1.smt2': oracle.manifest['01_eq1.smt2']})
        run = run_audit(suite, partial, StrategyConfig())
        self.assertEqual(run.hit_paths, ['02_eq3.smt2'])
        self.assertEqual(run.records[1].audit_status, 'error')
        self.assertEqual(run.unsound_findings, [])

    def test_unknown_mode(self):
        suite, oracle = bundled('eq1-eq3')
        with self.assertRaises(ValueError):
            SuiteRunner(oracle, StrategyConfig(), 'greentrie')

    def test_repeat_averages_timings(self):
        suite, oracle = bundled('eq1-eq3')
        run = run_repeated(suite, oracle, StrategyConfig(), repeat=3)
        self.assertEqual(run.metrics.cache_hits, 1)
        with self.assertRaises(ValueError):
            run_repeated(suite, oracle, StrategyConfig(), repeat=0)

    def test_parallel_keeps_order(self):
        first, oracle = bundled('eq1-eq3')
        second = load_suite(SUITES / 'eq1-eq2')
        oracle.manifest.update(ScriptedOracle.from_file(SUITES / 'eq1-eq2' / MANIFEST_NAME).manifest)
        runs = run_suites([first, second], oracle, StrategyConfig(), parallel=True, max_workers=2)
        self.assertEqual([r.metrics.suite_id for r in runs], ['eq1-eq3', 'eq1-eq2'])
        self.assertEqual([r.metrics.cache_hits for r in runs], [1, 1])

    def test_ablation_versions_agree(self):
        suite, oracle = bundled('eq1-eq3')
        rows = run_ablation(suite, oracle, StrategyConfig(lookup_deadline_ms=None))
        self.assertEqual([r['version'] for r in rows], [label for label, _ in ABLATION_VERSIONS])
        self.assertEqual({r['cache_hits'] for r in rows}, {1})


class TestMetrics(unittest.TestCase):

    def test_empty_suite_ratios(self):
        metrics = SuiteMetrics('empty')
        self.assertEqual(metrics.unsat_reuse_ratio, 0.0)
        self.assertEqual(metrics.time_saved_on_unsat_ratio, 0.0)

    def test_ratios(self):
        metrics = SuiteMetrics('s', formula_count=10, unsat_count=4, cache_hits=1)
        self.assertEqual(metrics.unsat_reuse_ratio, 25.0)
        self.assertEqual(metrics.all_formulae_reuse_ratio, 10.0)

    def test_average_timings(self):
        runs = [SuiteMetrics('s', cache_hits=1, solver_nanos=10), SuiteMetrics('s', cache_hits=1, solver_nanos=20)]
        merged = average_timings(runs)
        self.assertEqual(merged.solver_nanos, 15)
        self.assertEqual(merged.cache_hits, 1)
        with self.assertRaises(ValueError):
            average_timings([])


class TestReporters(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        suite, oracle = bundled('eq1-eq3')
        self.runs = [run_audit(suite, oracle, StrategyConfig())]

    def tearDown(self):
        self.tmp.cleanup()

    def test_json(self):
        path = emit_report(self.runs, 'json', Path(self.tmp.name) / 'out' / 'report.json', True)
        with open(path) as f:
            data = json.load(f)
        self.assertEqual(len(data), 1)
        self.assertEqual(data[0]['suite_id'], 'eq1-eq3')
        self.assertEqual(data[0]['cache_hits'], 1)
        self.assertEqual(data[0]['unsat_reuse_ratio'], 50.0)
        self.assertEqual(data[0]['config']['strategy'], 'cachealot')
        self.assertEqual(data[0]['audit_findings'], [])
        self.assertEqual([f['path'] for f in data[0]['files']], ['01_eq1.smt2', '02_eq3.smt2'])

    def test_csv(self):
        path = emit_report(self.runs * 2, 'csv', Path(self.tmp.name) / 'report.csv')
        with open(path, newline='') as f:
            rows = list(csv.reader(f))
        self.assertEqual(rows[0], CSV_HEADER)
        self.assertEqual(len(rows), 3)

    def test_unknown_format(self):
        with self.assertRaises(ValueError):
            emit_report(self.runs, 'html', Path(self.tmp.name) / 'report.html')


class TestGenerator(unittest.TestCase):

    def test_deterministic(self):
        params = GeneratorParams(files=10)
        self.assertEqual(generate_files(1, params), generate_files(1, params))
        self.assertNotEqual(generate_files(1, params)[0], generate_files(2, params)[0])

    def test_files_parse_and_cores_are_in_range(self):
        files, manifest = generate_files(3, GeneratorParams(files=40))
        self.assertEqual(set(files), set(manifest))
        for path, data in files.items():
            formula = to_formula(parse_query_file(data, path))
            for index in manifest[path].get('core', []):
                self.assertLess(index, len(formula))

    def test_invalid_params(self):
        with self.assertRaises(ValueError):
            GeneratorParams(files=0)
        with self.assertRaises(ValueError):
            GeneratorParams(unsat_share=1.5)
        with self.assertRaises(ValueError):
            GeneratorParams(min_cycle=4, max_cycle=3)


class TestSyntheticSuites(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.tmp = tempfile.TemporaryDirectory()
        cls.suites = {}
        for seed in SEEDS:
            out = Path(cls.tmp.name) / f'seed{seed}'
            suite = generate_synthetic_suite(seed, out, GeneratorParams(files=200))
            cls.suites[seed] = (suite, ScriptedOracle.from_file(out / MANIFEST_NAME))
        cls.config = StrategyConfig(lookup_deadline_ms=None)

    @classmethod
    def tearDownClass(cls):
        cls.tmp.cleanup()

    def test_audited_hits_are_sound(self):
        for seed, (suite, oracle) in self.suites.items():
            run = run_audit(suite, oracle, self.config)
            self.assertEqual(run.unsound_findings, [], f"seed {seed}")
            self.assertGreater(run.metrics.cache_hits, 0, f"seed {seed}")
            formulas = {f.origin: f for f in suite.formulas()}
            stored = {}
            for record in run.records:
                if record.core_id is not None and record.resolved_by == 'solver':
                    stored[record.core_id] = record.path
            for record in run.records:
                if record.resolved_by == 'cache':
                    self.assertIn(record.core_id, stored)
                    self.assertEqual(record.audit_status, 'unsat')
                    self.assertIn(record.path, formulas)

    def test_substitutions_pass_containment_check(self):
        for seed, (suite, oracle) in self.suites.items():
            runner = SuiteRunner(oracle, self.config)
            run = runner.run(suite)
            formulas = {f.origin: f for f in suite.formulas()}
            for record in run.records:
                if record.resolved_by != 'cache':
                    continue
                entry = runner.engine.store.get(record.core_id)
                mapping = {v: Variable(record.substitution[v.name], v.sort) for v in entry.free_vars}
                self.assertTrue(substitution_holds(entry.clauses, mapping, formulas[record.path]), f"seed {seed}")

    def test_canonized_utopia_hits_are_cachealot_hits(self):
        """Test that every canonized footprint hit is also found by the substitution search"""
        for seed, (suite, oracle) in self.suites.items():
            utopia = set(run_suite(suite, oracle, self.config.with_options(canonize=True), 'utopia').hit_paths)
            cachealot = set(run_suite(suite, oracle, self.config).hit_paths)
            self.assertLessEqual(utopia, cachealot, f"seed {seed}")

    def test_canonize_does_not_change_cachealot_outcomes(self):
        for seed, (suite, oracle) in self.suites.items():
            plain = run_suite(suite, oracle, self.config)
            canonized = run_suite(suite, oracle, self.config.with_options(canonize=True))
            self.assertEqual([r.outcome for r in plain.records], [r.outcome for r in canonized.records], f"seed {seed}")

    def test_optimisations_do_not_change_outcomes(self):
        for seed, (suite, oracle) in self.suites.items():
            outcomes = set()
            for o1 in (False, True):
                for o2 in (False, True):
                    for o3 in (False, True):
                        run = run_suite(suite, oracle, self.config.with_options(o1=o1, o2=o2, o3=o3))
                        outcomes.add(tuple(r.outcome for r in run.records))
            self.assertEqual(len(outcomes), 1, f"seed {seed}")


if __name__ == '__main__':
    unittest.main()
