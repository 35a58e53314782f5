import unittest
import json
import sys
import tempfile
from pathlib import Path

from click.testing import CliRunner

# Add src to path
sys.path.append(str(Path(__file__).parent.parent / "src"))

from main import EXIT_ERROR, EXIT_UNSOUND, cli

SUITES = Path(__file__).parent.parent / "suites"
EQ1_EQ3 = str(SUITES / 'eq1-eq3')
EQ1_EQ3_ORACLE = str(SUITES / 'eq1-eq3' / 'manifest.json')


class TestCli(unittest.TestCase):

    def setUp(self):
        self.runner = CliRunner()
        self.tmp = tempfile.TemporaryDirectory()
        self.tmp_path = Path(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()

    def invoke(self, *args):
        return self.runner.invoke(cli, list(args))

    def test_run_prints_summary(self):
        result = self.invoke('run', '--suite', EQ1_EQ3, '--oracle', EQ1_EQ3_ORACLE)
        self.assertEqual(result.exit_code, 0, result.output)
        self.assertIn('eq1-eq3', result.output)
        self.assertIn('50.00', result.output)

    def test_run_writes_json_report(self):
        report = self.tmp_path / 'report.json'
        result = self.invoke('run', '--suite', EQ1_EQ3, '--oracle', EQ1_EQ3_ORACLE, '--audit',
                             '--report', str(report), '--format', 'json')
        self.assertEqual(result.exit_code, 0, result.output)
        data = json.loads(report.read_text())
        self.assertEqual(data[0]['cache_hits'], 1)
        self.assertEqual(data[0]['config']['audit'], True)

    def test_run_utopia_canonized(self):
        report = self.tmp_path / 'report.csv'
        result = self.invoke('run', '--suite', EQ1_EQ3, '--oracle', EQ1_EQ3_ORACLE, '--mode', 'utopia',
                             '--canonize', 'on', '--report', str(report), '--format', 'csv')
        self.assertEqual(result.exit_code, 0, result.output)
        self.assertEqual(len(report.read_text().splitlines()), 2)

    def test_unsound_hit_exit_code(self):
        manifest = self.tmp_path / 'manifest.json'
        manifest.write_text(json.dumps({
            '01_eq1.smt2': {'status': 'unsat', 'core': [0, 1, 2]},
            '02_eq3.smt2': {'status': 'sat'},
        }))
        result = self.invoke('run', '--suite', EQ1_EQ3, '--oracle', str(manifest), '--audit')
        self.assertEqual(result.exit_code, EXIT_UNSOUND)
        self.assertIn('02_eq3.smt2', result.output)

    def test_manifest_miss_counts_as_unknown(self):
        manifest = self.tmp_path / 'manifest.json'
        manifest.write_text(json.dumps({'02_eq3.smt2': {'status': 'unsat'}}))
        report = self.tmp_path / 'report.json'
        result = self.invoke('run', '--suite', EQ1_EQ3, '--oracle', str(manifest),
                             '--report', str(report), '--format', 'json')
        self.assertEqual(result.exit_code, 0, result.output)
        data = json.loads(report.read_text())
        self.assertEqual((data[0]['unknown_count'], data[0]['unsat_count']), (1, 1))

    def test_invalid_manifest_is_an_error(self):
        manifest = self.tmp_path / 'manifest.json'
        manifest.write_text(json.dumps({'01_eq1.smt2': {'status': 'maybe'}}))
        result = self.invoke('run', '--suite', EQ1_EQ3, '--oracle', str(manifest))
        self.assertEqual(result.exit_code, EXIT_ERROR)
        self.assertIn('[ERROR]', result.output)

    def test_invalid_bloom_bits(self):
        result = self.invoke('run', '--suite', EQ1_EQ3, '--oracle', EQ1_EQ3_ORACLE, '--bloom-bits', '0')
        self.assertEqual(result.exit_code, EXIT_ERROR)

    def test_solver_options_are_exclusive(self):
        result = self.invoke('run', '--suite', EQ1_EQ3, '--oracle', EQ1_EQ3_ORACLE, '--solver-cmd', 'z3 -in')
        self.assertNotEqual(result.exit_code, 0)
        self.assertIn('mutually exclusive', result.output)

    def test_gen(self):
        out = self.tmp_path / 'suite'
        result = self.invoke('gen', '--seed', '1', '--files', '5', '--out', str(out))
        self.assertEqual(result.exit_code, 0, result.output)
        self.assertEqual(len(list(out.glob('*.smt2'))), 5)
        self.assertEqual(len(json.loads((out / 'manifest.json').read_text())), 5)

    def test_gen_then_run(self):
        out = self.tmp_path / 'suite'
        self.invoke('gen', '--seed', '2', '--files', '30', '--out', str(out))
        result = self.invoke('run', '--suite', str(out), '--oracle', str(out / 'manifest.json'), '--audit')
        self.assertEqual(result.exit_code, 0, result.output)

    def test_ablate(self):
        result = self.invoke('ablate', '--suite', EQ1_EQ3, '--oracle', EQ1_EQ3_ORACLE)
        self.assertEqual(result.exit_code, 0, result.output)
        for label in ('none', 'O2+O3', 'O1+O2+O3'):
            self.assertIn(label, result.output)


if __name__ == '__main__':
    unittest.main()
