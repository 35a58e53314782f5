"""Formula builders shared by the suite generator and the test suite"""
import random
from typing import Dict, List, Optional, Sequence, Tuple

from terms.sorts import BOOL, INT
from terms.term import (Apply, Binder, Clause, Constant, Formula, Substitution, Term, Variable,
                        apply_substitution)

RELATIONS = ('>', '>=', '<', '=', 'distinct')


def ivar(name: str) -> Variable:
    return Variable(name, INT)


def relation(op: str, left: Term, right: Term) -> Clause:
    return Clause.of(Apply(BOOL, op, (left, right)))


def gt(left: str, right: str) -> Clause:
    return relation('>', ivar(left), ivar(right))


def formula_of(clauses: Sequence[Clause], origin: str = '', index: int = 0) -> Formula:
    return Formula(tuple(clauses), origin, index)


def motivating_formulas() -> Dict[str, Formula]:
    """A three-variable cycle, a renamed cycle with one extra clause first and last"""
    return {
        'eq1': formula_of([gt('x', 'y'), gt('y', 'z'), gt('z', 'x')], 'eq1.smt2', 0),
        'eq2': formula_of([gt('b', 'c'), gt('c', 'd'), gt('d', 'b'), gt('a', 'b')], 'eq2.smt2', 1),
        'eq3': formula_of([gt('a', 'b'), gt('b', 'c'), gt('c', 'd'), gt('d', 'b')], 'eq3.smt2', 1),
    }


def cycle(names: Sequence[str], op: str = '>') -> List[Clause]:
    """n0 op n1, n1 op n2, ..., n(k-1) op n0: unsat for a strict order"""
    return [relation(op, ivar(a), ivar(b)) for a, b in zip(names, list(names[1:]) + [names[0]])]


def chain(names: Sequence[str], op: str = '>') -> List[Clause]:
    """n0 op n1 op ... op n(k-1): satisfiable"""
    return [relation(op, ivar(a), ivar(b)) for a, b in zip(names, names[1:])]


def quantified_gt(left: str, right: str, bound: str = 'q') -> Clause:
    """(exists ((q Int)) (and (= q left) (> q right))), equivalent to left > right"""
    q = ivar(bound)
    body = Apply(BOOL, 'and', (Apply(BOOL, '=', (q, ivar(left))), Apply(BOOL, '>', (q, ivar(right)))))
    return Clause.of(Binder('exists', (q,), body))


def random_renaming(rng: random.Random, variables: Sequence[Variable], targets: Sequence[Variable],
                    injective: bool = False) -> Substitution:
    """Sort-preserving map from variables into targets"""
    mapping = {}
    for var in variables:
        pool = [t for t in targets if t.sort == var.sort and not (injective and t in mapping.values())]
        if not pool:
            raise ValueError(f"No target of sort {var.sort} left for {var.name}")
        mapping[var] = rng.choice(pool)
    return Substitution(mapping)


def embed(rng: random.Random, core: Sequence[Clause], noise: Sequence[Clause],
          targets: Sequence[Variable], injective: bool = False) -> Tuple[List[Clause], Substitution]:
    """Renamed core mixed into noise clauses and shuffled"""
    core_vars = list(dict.fromkeys(v for c in core for v in c.free_vars))
    renaming = random_renaming(rng, core_vars, targets, injective)
    clauses = [apply_substitution(c, renaming) for c in core] + list(noise)
    rng.shuffle(clauses)
    return clauses, renaming


def random_relation(rng: random.Random, variables: Sequence[Variable]) -> Clause:
    op = rng.choice(RELATIONS)
    if rng.random() < 0.2 and len(variables) >= 1:
        left = rng.choice(variables)
        right = Apply(INT, '+', (rng.choice(variables), Constant(INT, str(rng.randint(0, 3)))))
        return relation(op, left, right)
    return relation(op, rng.choice(variables), rng.choice(variables))


def random_instance(rng: random.Random, max_core_vars: int = 6, max_formula_vars: int = 8,
                    max_core_clauses: int = 4, max_noise: int = 4, min_core_vars: int = 2,
                    min_formula_vars: int = 3) -> Tuple[List[Clause], Formula]:
    """Small core and formula; about half the formulas contain the core under some renaming"""
    core_vars = [ivar(f'x{i}') for i in range(rng.randint(min_core_vars, max_core_vars))]
    formula_vars = [ivar(f'a{i}') for i in range(rng.randint(min_formula_vars, max_formula_vars))]
    core = list(dict.fromkeys(random_relation(rng, core_vars) for _ in range(rng.randint(1, max_core_clauses))))
    noise = [random_relation(rng, formula_vars) for _ in range(rng.randint(0, max_noise))]
    if rng.random() < 0.5:
        clauses, _ = embed(rng, core, noise, formula_vars)
    else:
        clauses = noise or [random_relation(rng, formula_vars)]
    return core, formula_of(clauses, 'random.smt2')


def random_clause(rng: random.Random, max_depth: int = 6, free: Optional[Sequence[Variable]] = None) -> Clause:
    """Random Bool clause over Int and Bool variables, binders included"""
    free = list(free) if free is not None else [ivar(f'x{i}') for i in range(4)] + [Variable('p', BOOL)]
    counter = [0]

    def int_term(depth: int, scope: List[Variable]) -> Term:
        ints = [v for v in scope if v.sort == INT]
        if depth <= 1 or rng.random() < 0.4:
            return rng.choice(ints) if ints and rng.random() < 0.8 else Constant(INT, str(rng.randint(0, 9)))
        op = rng.choice(('+', '*', '-', 'ite'))
        if op == 'ite':
            return Apply(INT, 'ite', (bool_term(depth - 1, scope), int_term(depth - 1, scope), int_term(depth - 1, scope)))
        return Apply(INT, op, (int_term(depth - 1, scope), int_term(depth - 1, scope)))

    def bool_term(depth: int, scope: List[Variable]) -> Term:
        choice = rng.random()
        if depth <= 1 or choice < 0.3:
            bools = [v for v in scope if v.sort == BOOL]
            if bools and rng.random() < 0.3:
                return rng.choice(bools)
            return Apply(BOOL, rng.choice(RELATIONS), (int_term(depth - 1, scope), int_term(depth - 1, scope)))
        if choice < 0.55:
            counter[0] += 1
            bound = tuple(ivar(f'q{counter[0]}_{i}') for i in range(rng.randint(1, 2)))
            return Binder(rng.choice(('forall', 'exists')), bound, bool_term(depth - 1, scope + list(bound)))
        if choice < 0.7:
            return Apply(BOOL, 'not', (bool_term(depth - 1, scope),))
        return Apply(BOOL, rng.choice(('and', 'or', '=>')), (bool_term(depth - 1, scope), bool_term(depth - 1, scope)))

    return Clause.of(bool_term(max_depth, free))


def stress_instance(core_size: int = 12, formula_size: int = 20) -> Tuple[List[Clause], Formula]:
    """
    Core whose every clause unifies with formula_size formula clauses, yet no
    complete substitution exists: the last core clause needs x0 on the left of
    a '<' while every other clause puts x0 on the left of a '>'.
    """
    core = [gt(f'x{i}', f'y{i}') for i in range(core_size - 1)]
    core.append(relation('<', ivar('x0'), ivar('x1')))
    clauses = [gt(f'a{j}', f'b{j}') for j in range(formula_size)]
    clauses += [relation('<', ivar(f'c{j}'), ivar(f'd{j}')) for j in range(formula_size)]
    return core, formula_of(clauses, 'stress.smt2')
