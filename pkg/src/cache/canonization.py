from typing import Iterable, Tuple

from terms.term import Clause, Formula, Substitution, Variable, substitute

CANONICAL_PREFIX = 'v'


def canonical_renaming(clauses: Iterable[Clause]) -> Substitution:
    """Free variables to v0, v1, ... by first occurrence, left to right"""
    order = dict.fromkeys(v for c in clauses for v in c.free_vars)
    return Substitution({v: Variable(f'{CANONICAL_PREFIX}{i}', v.sort) for i, v in enumerate(order)})


def canonize_clauses(clauses: Iterable[Clause]) -> Tuple[Tuple[Clause, ...], Substitution]:
    """
    Canonical clauses and the renaming that produced them.

    Free variables become v0, v1, ... and bound variables take their positional
    names (binder depth, position), so binder names given by the user are not
    kept. Canonizing canonical clauses returns them unchanged.
    """
    clauses = tuple(clauses)
    renaming = canonical_renaming(clauses)
    # bound variables are normalized first so canonical names cannot be captured
    canonical = tuple(Clause.of(substitute(c.key, renaming), c.name) for c in clauses)
    return canonical, renaming


def canonize(formula: Formula) -> Formula:
    """Formula with canonical clauses; bound variables come back in positional form"""
    clauses, _ = canonize_clauses(formula.clauses)
    return Formula(clauses, formula.origin, formula.index)
