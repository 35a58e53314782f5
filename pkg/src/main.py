import click
import logging
import sys
from typing import List, Optional, Tuple
from tabulate import tabulate
from bench.generator import GeneratorParams, generate_synthetic_suite
from bench.harness import MODES, SuiteRun, run_ablation, run_suites
from cache.strategy_config import StrategyConfig
from config.settings import Settings, settings
from parsers.suite_loader import load_suite
from reporters.suite_reporter import REPORT_FORMATS, emit_report
from solvers.base import SolverBackend
from solvers.process_solver import ProcessSolver
from solvers.scripted_oracle import ScriptedOracle

EXIT_ERROR = 1
EXIT_UNSOUND = 2

ON_OFF = click.Choice(['on', 'off'])


def _flag(value: Optional[str]) -> Optional[bool]:
    return None if value is None else value == 'on'


def _configure_logging(verbose: int):
    level = settings.get('logging.level', 'WARNING')
    if verbose:
        level = 'DEBUG' if verbose > 1 else 'INFO'
    logging.basicConfig(level=level, format=settings.get('logging.format', '%(levelname)s %(name)s: %(message)s'))


def _build_solver(solver_cmd: Optional[str], oracle: Optional[str]) -> SolverBackend:
    if solver_cmd and oracle:
        raise click.UsageError("--solver-cmd and --oracle are mutually exclusive")
    if oracle:
        return ScriptedOracle.from_file(oracle)
    return ProcessSolver(
        solver_cmd or settings.get('solver.command', 'z3 -in'),
        settings.get('solver.input', 'stdin'),
    )


@click.group()
@click.version_option(version='1.0.0')
@click.option('--config', 'config_path', type=click.Path(exists=True, dir_okay=False), help='Alternative config.yaml')
@click.option('--verbose', '-v', count=True, help='-v for progress logs, -vv for per-candidate logs')
def cli(config_path: Optional[str], verbose: int):
    """Unsat core cache - reuse unsat cores across SMT queries up to variable renaming"""
    if config_path:
        settings.config = Settings(config_path).config
    _configure_logging(verbose)


def solver_options(func):
    func = click.option('--oracle', type=click.Path(exists=True, dir_okay=False),
                        help='JSON manifest answering for the solver')(func)
    func = click.option('--solver-cmd', help='Solver command reading SMT-LIB (default: solver.command)')(func)
    func = click.option('--solver-timeout', type=float, help='Seconds per solver call')(func)
    return func


@cli.command()
@click.option('--suite', 'suite_dirs', multiple=True, required=True, type=click.Path(exists=True, file_okay=False),
              help='Directory of .smt2 files; repeat for several suites')
@click.option('--mode', type=click.Choice(MODES), default='cachealot', help='Testing strategy, or no cache')
@click.option('--canonize', type=ON_OFF, help='Rename variables by first occurrence before testing')
@click.option('--bloom-bits', type=int, help='Bloom bitset width')
@click.option('--o1', type=ON_OFF, help='Clause hash buckets')
@click.option('--o2', type=ON_OFF, help='Domain filtering of substitution tables')
@click.option('--o3', type=ON_OFF, help='Lazy join')
@click.option('--lookup-timeout-ms', type=float, help='Deadline per cache lookup')
@solver_options
@click.option('--audit', is_flag=True, help='Also solve every cache hit and report disagreements')
@click.option('--repeat', type=int, help='Replays per suite, timings averaged')
@click.option('--parallel/--sequential', default=None, help='Run several suites concurrently')
@click.option('--report', type=click.Path(dir_okay=False), help='Write a report file')
@click.option('--format', 'report_format', type=click.Choice(REPORT_FORMATS), help='Report format')
def run(suite_dirs: Tuple[str, ...], mode: str, canonize: Optional[str], bloom_bits: Optional[int],
        o1: Optional[str], o2: Optional[str], o3: Optional[str], lookup_timeout_ms: Optional[float],
        oracle: Optional[str], solver_cmd: Optional[str], solver_timeout: Optional[float], audit: bool,
        repeat: Optional[int], parallel: Optional[bool], report: Optional[str], report_format: Optional[str]):
    """Replay suites through the cache and the solver"""
    try:
        config = StrategyConfig.from_settings(
            settings, canonize=_flag(canonize), bloom_bits=bloom_bits,
            o1=_flag(o1), o2=_flag(o2), o3=_flag(o3), lookup_deadline_ms=lookup_timeout_ms,
        )
        solver = _build_solver(solver_cmd, oracle)
        suites = [load_suite(d) for d in suite_dirs]

        click.echo(f"[*] Running {len(suites)} suite(s) in {mode} mode"
                   f" ({config.optimisation_label()}, canonize {'on' if config.canonize else 'off'})")
        runs = run_suites(
            suites, solver, config, mode, audit,
            repeat=repeat or settings.get('execution.repeat', 1),
            solver_timeout=solver_timeout if solver_timeout is not None else settings.get('solver.timeout'),
            parallel=parallel if parallel is not None else settings.get('execution.parallel_suites', False),
            max_workers=settings.get('execution.max_workers', 4),
        )
        _display_console_results(runs)

        if report:
            report_path = emit_report(
                runs, report_format or settings.get('reporting.format', 'json'), report,
                settings.get('reporting.include_file_records', False),
            )
            click.echo(f"[+] Report written: {report_path}")

    except click.UsageError:
        raise
    except Exception as e:
        click.echo(f"[ERROR] {e}", err=True)
        sys.exit(EXIT_ERROR)

    unsound = [f for r in runs for f in r.unsound_findings]
    if unsound:
        click.echo(f"[!] {len(unsound)} unsound cache hit(s):", err=True)
        for finding in unsound:
            click.echo(f"   {finding.path}: core {finding.core_id}, {finding.reason} ({finding.solver_status})", err=True)
        sys.exit(EXIT_UNSOUND)


def _display_console_results(runs: List[SuiteRun]):
    """Display results in console"""
    rows = []
    for run in runs:
        m = run.metrics
        rows.append([
            m.suite_id, m.formula_count, m.sat_count, m.unsat_count, m.unknown_count, m.cache_hits,
            m.timeout_misses, f'{m.unsat_reuse_ratio:.2f}', f'{m.lookup_overhead_nanos / 1e6:.1f}',
            f'{m.time_saved_nanos / 1e6:.1f}' if run.audit else '-',
        ])
    click.echo(tabulate(rows, headers=[
        'suite', 'formulae', 'sat', 'unsat', 'unknown', 'hits', 'timeouts', 'unsat reuse %',
        'overhead ms', 'saved ms',
    ]))
    for run in runs:
        if run.findings:
            click.echo(f"[!] {run.metrics.suite_id}: {len(run.findings)} audit finding(s)")


@cli.command()
@click.option('--seed', type=int, required=True, help='Random seed')
@click.option('--files', type=int, help='Number of files (default: generator.files)')
@click.option('--out', type=click.Path(file_okay=False), required=True, help='Output directory')
def gen(seed: int, files: Optional[int], out: str):
    """Generate a synthetic suite with its oracle manifest"""
    try:
        params = GeneratorParams.from_settings(settings, files=files)
        suite = generate_synthetic_suite(seed, out, params)
        click.echo(f"[+] Wrote {len(suite)} files and manifest.json to {out}")
    except Exception as e:
        click.echo(f"[ERROR] {e}", err=True)
        sys.exit(EXIT_ERROR)


@cli.command()
@click.option('--suite', 'suite_dir', required=True, type=click.Path(exists=True, file_okay=False))
@click.option('--lookup-timeout-ms', type=float, help='Deadline per cache lookup')
@solver_options
def ablate(suite_dir: str, lookup_timeout_ms: Optional[float], oracle: Optional[str],
           solver_cmd: Optional[str], solver_timeout: Optional[float]):
    """Compare the join optimisation versions on one suite"""
    try:
        config = StrategyConfig.from_settings(settings, strategy='cachealot', lookup_deadline_ms=lookup_timeout_ms)
        solver = _build_solver(solver_cmd, oracle)
        suite = load_suite(suite_dir)
        rows = run_ablation(
            suite, solver, config,
            solver_timeout if solver_timeout is not None else settings.get('solver.timeout'),
        )
        click.echo(tabulate(rows, headers='keys', floatfmt='.2f'))
    except click.UsageError:
        raise
    except Exception as e:
        click.echo(f"[ERROR] {e}", err=True)
        sys.exit(EXIT_ERROR)


if __name__ == '__main__':
    cli(prog_name='unsat-cache')
