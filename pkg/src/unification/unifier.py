from typing import Dict, List, Optional, Sequence, Tuple

from terms.term import Apply, Binder, Clause, Constant, Substitution, Term, Variable

# (binder depth, position) of a bound variable
BoundSlot = Tuple[int, int]


class UnifyScope:
    """
    Free-variable bindings plus a stack of binder correspondences.

    Each binder pushes one frame per side; a name resolves to the innermost
    frame that binds it, so inner binders shadow outer ones and free names.
    """

    def __init__(self):
        self.current: Dict[Variable, Variable] = {}
        self._core_frames: List[Dict[str, BoundSlot]] = []
        self._formula_frames: List[Dict[str, BoundSlot]] = []

    def push(self, core: Binder, formula: Binder):
        depth = len(self._core_frames)
        self._core_frames.append({v.name: (depth, i) for i, v in enumerate(core.bound)})
        self._formula_frames.append({v.name: (depth, i) for i, v in enumerate(formula.bound)})

    def pop(self):
        self._core_frames.pop()
        self._formula_frames.pop()

    @staticmethod
    def _resolve(frames: List[Dict[str, BoundSlot]], name: str) -> Optional[BoundSlot]:
        for frame in reversed(frames):
            if name in frame:
                return frame[name]
        return None

    def match_variable(self, core: Variable, formula: Variable) -> bool:
        core_slot = self._resolve(self._core_frames, core.name)
        formula_slot = self._resolve(self._formula_frames, formula.name)
        if core_slot is not None or formula_slot is not None:
            return core_slot == formula_slot
        bound = self.current.get(core)
        if bound is None:
            self.current[core] = formula
            return True
        return bound == formula


def _unify_terms(core: Term, formula: Term, scope: UnifyScope) -> bool:
    if type(core) is not type(formula) or core.sort != formula.sort:
        return False
    if isinstance(core, Variable):
        return scope.match_variable(core, formula)
    if isinstance(core, Constant):
        return core.value == formula.value
    if isinstance(core, Apply):
        if core.op != formula.op or core.interpreted != formula.interpreted or len(core.args) != len(formula.args):
            return False
        return all(_unify_terms(c, f, scope) for c, f in zip(core.args, formula.args))
    if isinstance(core, Binder):
        if core.kind != formula.kind or len(core.bound) != len(formula.bound):
            return False
        if any(c.sort != f.sort for c, f in zip(core.bound, formula.bound)):
            return False
        scope.push(core, formula)
        try:
            return _unify_terms(core.body, formula.body, scope)
        finally:
            scope.pop()
    return False


def unify(core_clause: Clause, formula_clause: Clause) -> Optional[Substitution]:
    """
    Unifying substitution from the core clause onto the formula clause.

    Returns None when the clauses differ in shape, operators, constants or
    sorts, or when a core variable would need two different images.
    """
    scope = UnifyScope()
    if not _unify_terms(core_clause.term, formula_clause.term, scope):
        return None
    return Substitution(scope.current)


def unify_many(core_clause: Clause, candidates: Sequence[Clause]) -> List[Tuple[int, Substitution]]:
    results = []
    for index, candidate in enumerate(candidates):
        substitution = unify(core_clause, candidate)
        if substitution is not None:
            results.append((index, substitution))
    return results
