from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, FrozenSet, Iterable, Optional

from terms.term import Formula


class SolverCrash(RuntimeError):
    """The solver process failed without producing a verdict"""

    def __init__(self, returncode: Optional[int], stderr: str = ''):
        detail = stderr.strip().splitlines()[-1] if stderr.strip() else 'no output'
        super().__init__(f"Solver exited with {returncode}: {detail}")
        self.returncode = returncode
        self.stderr = stderr


class SolveStatus(Enum):
    SAT = 'sat'
    UNSAT = 'unsat'
    UNKNOWN = 'unknown'


@dataclass(frozen=True)
class SolveResult:
    status: SolveStatus
    core: FrozenSet[int] = field(default_factory=frozenset)
    solve_nanos: int = 0

    @property
    def is_unsat(self) -> bool:
        return self.status is SolveStatus.UNSAT

    def to_dict(self) -> Dict[str, Any]:
        return {'status': self.status.value, 'core': sorted(self.core), 'nanos': self.solve_nanos}


def check_core_indices(formula: Formula, indices: Iterable[int]) -> FrozenSet[int]:
    indices = frozenset(indices)
    if not indices:
        raise ValueError("Core index set must not be empty")
    out_of_range = sorted(i for i in indices if not 0 <= i < len(formula))
    if out_of_range:
        raise ValueError(f"Core indices {out_of_range} outside 0..{len(formula) - 1}")
    return indices


class SolverBackend(ABC):
    """Base class for solver adapters"""

    def __init__(self, name: str):
        self.name = name

    @abstractmethod
    def solve(self, formula: Formula, timeout: Optional[float] = None) -> SolveResult:
        """
        Decide a formula

        Args:
            formula: Conjunctive formula; clause i is reported in cores as index i
            timeout: Seconds before the attempt counts as unknown

        Returns:
            SolveResult: verdict, unsat core indices, and solving time
        """
        pass

    def validate_core(self, formula: Formula, indices: Iterable[int], timeout: Optional[float] = None) -> bool:
        """Re-solve only the indexed clauses; True iff they are unsat on their own"""
        indices = check_core_indices(formula, indices)
        subset = Formula(tuple(formula.clauses[i] for i in sorted(indices)), formula.origin, formula.index)
        return self.solve(subset, timeout).is_unsat
