"""Brute-force complete-substitution search, the reference for the join pipeline"""
from typing import Dict, List, Optional, Sequence

from terms.term import Clause, Formula, Substitution, Variable, substitute

MAX_CORE_VARIABLES = 6
MAX_FORMULA_VARIABLES = 8


class SizeGuard(ValueError):
    """Instance too large for exhaustive enumeration"""


def brute_force_complete(core: Sequence[Clause], formula: Formula,
                         max_core_variables: int = MAX_CORE_VARIABLES,
                         max_formula_variables: int = MAX_FORMULA_VARIABLES) -> Optional[Substitution]:
    """
    First sort-respecting map from core variables to formula variables under
    which every core clause is structurally present in the formula.

    Maps are enumerated lexicographically: core variables in first-occurrence
    order, each ranging over formula variables in first-occurrence order. A
    clause is checked as soon as all its variables are assigned, which skips
    whole blocks of the enumeration without changing which map comes first.
    """
    core_vars: List[Variable] = list(dict.fromkeys(v for c in core for v in c.free_vars))
    formula_vars = formula.free_vars
    if len(core_vars) > max_core_variables or len(formula_vars) > max_formula_variables:
        raise SizeGuard(
            f"{len(core_vars)} core / {len(formula_vars)} formula variables exceed "
            f"{max_core_variables} / {max_formula_variables}"
        )

    keys = formula.clause_keys
    position = {v: i for i, v in enumerate(core_vars)}
    # clauses become checkable once their last variable (in enumeration order) is assigned
    ready: Dict[int, List[Clause]] = {i: [] for i in range(-1, len(core_vars))}
    for clause in core:
        last = max((position[v] for v in clause.free_vars), default=-1)
        ready[last].append(clause)
    choices = [[f for f in formula_vars if f.sort == v.sort] for v in core_vars]
    assignment: Dict[Variable, Variable] = {}

    def holds(clauses: List[Clause]) -> bool:
        return all(substitute(c.key, assignment) in keys for c in clauses)

    def search(depth: int) -> bool:
        if depth == len(core_vars):
            return True
        var = core_vars[depth]
        for image in choices[depth]:
            assignment[var] = image
            if holds(ready[depth]) and search(depth + 1):
                return True
        assignment.pop(var, None)
        return False

    if not holds(ready[-1]):
        return None
    if search(0):
        return Substitution(assignment)
    return None
