import logging
import os
import re
import shlex
import subprocess
import tempfile
import time
from typing import List, Optional

from parsers.sexpr import Atom, ParseError, SExpr, SList, read_all
from parsers.smtlib_printer import print_query
from terms.term import Formula
from .base import SolveResult, SolveStatus, SolverBackend, SolverCrash

logger = logging.getLogger(__name__)

INPUT_MODES = ('stdin', 'file')
_CLAUSE_NAME = re.compile(r'k(\d+)$')


def _core_indices(expr: SExpr) -> Optional[List[int]]:
    """Clause indices of a (k0 k3 ...) list, None when expr is not a core"""
    if not isinstance(expr, SList):
        return None
    indices = []
    for item in expr:
        if not isinstance(item, Atom) or item.kind != 'symbol':
            return None
        match = _CLAUSE_NAME.match(item.text)
        if match is None:
            return None
        indices.append(int(match.group(1)))
    return indices


def parse_solver_output(text: str, clause_count: int, solve_nanos: int = 0) -> SolveResult:
    """
    Read the verdict of a (check-sat) (get-unsat-core) exchange.

    An unsat verdict without a usable core (error reply, empty list, no reply)
    reports every clause as the core.
    """
    expressions = read_all(text)
    status = None
    position = 0
    for position, expr in enumerate(expressions):
        if isinstance(expr, Atom) and expr.text in ('sat', 'unsat', 'unknown'):
            status = SolveStatus(expr.text)
            break
    if status is None:
        raise ParseError(1, 1, f"No sat/unsat/unknown verdict in solver output: {text.strip()[:200]!r}")
    if status is not SolveStatus.UNSAT:
        return SolveResult(status, frozenset(), solve_nanos)

    core = None
    for expr in expressions[position + 1:]:
        core = _core_indices(expr)
        if core is not None:
            break
    if not core:
        logger.debug("Solver gave no unsat core, using every clause")
        return SolveResult(status, frozenset(range(clause_count)), solve_nanos)
    bad = [i for i in core if i >= clause_count]
    if bad:
        raise ParseError(1, 1, f"Unsat core names clauses {bad} of a {clause_count}-clause query")
    return SolveResult(status, frozenset(core), solve_nanos)


class ProcessSolver(SolverBackend):
    """One solver process per query, speaking SMT-LIB over stdin or a temporary file"""

    def __init__(self, command: str, input_mode: str = 'stdin', default_timeout: Optional[float] = None):
        super().__init__('process')
        if input_mode not in INPUT_MODES:
            raise ValueError(f"Unknown solver input mode '{input_mode}', expected one of {', '.join(INPUT_MODES)}")
        self.argv = shlex.split(command)
        if not self.argv:
            raise ValueError("Solver command is empty")
        self.input_mode = input_mode
        self.default_timeout = default_timeout

    def solve(self, formula: Formula, timeout: Optional[float] = None) -> SolveResult:
        timeout = timeout if timeout is not None else self.default_timeout
        query = print_query(formula)
        path = None
        argv, stdin = self.argv, query
        if self.input_mode == 'file':
            handle, path = tempfile.mkstemp(suffix='.smt2')
            with os.fdopen(handle, 'wb') as f:
                f.write(query)
            argv, stdin = self.argv + [path], None

        start = time.perf_counter_ns()
        try:
            completed = subprocess.run(argv, input=stdin, capture_output=True, timeout=timeout)
        except subprocess.TimeoutExpired:
            logger.info(f"{formula.origin}: solver timed out after {timeout}s")
            return SolveResult(SolveStatus.UNKNOWN, frozenset(), time.perf_counter_ns() - start)
        except OSError as e:
            raise SolverCrash(None, str(e)) from e
        finally:
            if path is not None:
                os.unlink(path)
        elapsed = time.perf_counter_ns() - start

        stdout = completed.stdout.decode('utf-8', errors='replace')
        stderr = completed.stderr.decode('utf-8', errors='replace')
        logger.debug(f"{formula.origin}: solver exit {completed.returncode}, {len(stdout)} bytes of output")
        try:
            return parse_solver_output(stdout, len(formula), elapsed)
        except ParseError:
            if completed.returncode != 0:
                raise SolverCrash(completed.returncode, stderr or stdout)
            raise
