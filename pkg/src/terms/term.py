from collections.abc import Mapping
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, Iterator, List, Optional, Tuple

from .sorts import ArraySort, BOOL, Sort

BINDER_KINDS = ('forall', 'exists', 'lambda')

# Reserved prefix (SMT-LIB keeps '@' for solver-internal symbols), so positional
# names never collide with user symbols.
BOUND_PREFIX = '@b'


class CaptureError(ValueError):
    """A substitution image would be captured by an enclosing binder"""


class NonInjectiveError(ValueError):
    """A renaming maps two variables to the same target"""


class SubstitutionSortError(ValueError):
    """A substitution pair does not preserve the variable sort"""


class SortError(ValueError):
    """A term has the wrong sort for its position"""


class Term:
    """Base class of the immutable term AST. Every node carries its sort."""

    sort: Sort

    def children(self) -> Tuple['Term', ...]:
        return ()


@dataclass(frozen=True)
class Constant(Term):
    """Interpreted literal; value is the canonical encoding of the literal"""
    sort: Sort
    value: str

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Variable(Term):
    """0-ary uninterpreted constant or bound variable. Identity is (name, sort)."""
    name: str
    sort: Sort

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Apply(Term):
    sort: Sort
    op: str
    args: Tuple[Term, ...]
    interpreted: bool = True

    def __post_init__(self):
        if not self.args:
            raise ValueError(f"Application of '{self.op}' needs at least one argument")

    def children(self) -> Tuple[Term, ...]:
        return self.args

    def __str__(self) -> str:
        return f"({self.op} {' '.join(str(a) for a in self.args)})"


@dataclass(frozen=True)
class Binder(Term):
    kind: str
    bound: Tuple[Variable, ...]
    body: Term
    sort: Sort = BOOL

    def __post_init__(self):
        if self.kind not in BINDER_KINDS:
            raise ValueError(f"Unknown binder kind: {self.kind}")
        if not self.bound:
            raise ValueError(f"{self.kind} needs at least one bound variable")
        names = [v.name for v in self.bound]
        if len(set(names)) != len(names):
            raise ValueError(f"Duplicate bound names in {self.kind}: {names}")

    def children(self) -> Tuple[Term, ...]:
        return (self.body,)

    def __str__(self) -> str:
        bound = ' '.join(f'({v.name} {v.sort})' for v in self.bound)
        return f'({self.kind} ({bound}) {self.body})'


def binder_sort(kind: str, bound: Tuple[Variable, ...], body: Term) -> Sort:
    """Sort of a binder node: Bool for quantifiers, curried arrays for lambda"""
    if kind != 'lambda':
        return BOOL
    sort = body.sort
    for var in reversed(bound):
        sort = ArraySort(var.sort, sort)
    return sort


def free_variables(term: Term) -> Tuple[Variable, ...]:
    """Free variables in first-occurrence order, honouring binder shadowing"""
    seen: Dict[Variable, None] = {}

    def walk(node: Term, bound: frozenset):
        if isinstance(node, Variable):
            if node.name not in bound and node not in seen:
                seen[node] = None
        elif isinstance(node, Apply):
            for arg in node.args:
                walk(arg, bound)
        elif isinstance(node, Binder):
            walk(node.body, bound | {v.name for v in node.bound})

    walk(term, frozenset())
    return tuple(seen)


def substitute(term: Term, mapping: Mapping) -> Term:
    """Replace free variables by their images; bound occurrences are left alone"""
    if not mapping:
        return term

    def walk(node: Term, bound: frozenset) -> Term:
        if isinstance(node, Variable):
            if node.name in bound:
                return node
            image = mapping.get(node)
            if image is None:
                return node
            if image.name in bound:
                raise CaptureError(
                    f"Image '{image.name}' of '{node.name}' is captured by an enclosing binder"
                )
            return image
        if isinstance(node, Apply):
            args = tuple(walk(arg, bound) for arg in node.args)
            if args == node.args:
                return node
            return Apply(node.sort, node.op, args, node.interpreted)
        if isinstance(node, Binder):
            body = walk(node.body, bound | {v.name for v in node.bound})
            if body is node.body:
                return node
            return Binder(node.kind, node.bound, body, node.sort)
        return node

    return walk(term, frozenset())


def normalize_bound(term: Term) -> Term:
    """
    Rename bound variables to positional names (binder depth, position).

    Two terms are alpha-equivalent with respect to bound variables iff their
    normal forms are structurally equal.
    """
    def walk(node: Term, env: Dict[str, Variable], depth: int) -> Term:
        if isinstance(node, Variable):
            return env.get(node.name, node)
        if isinstance(node, Apply):
            return Apply(node.sort, node.op, tuple(walk(a, env, depth) for a in node.args), node.interpreted)
        if isinstance(node, Binder):
            inner = dict(env)
            bound = []
            for pos, var in enumerate(node.bound):
                renamed = Variable(f'{BOUND_PREFIX}{depth}_{pos}', var.sort)
                inner[var.name] = renamed
                bound.append(renamed)
            return Binder(node.kind, tuple(bound), walk(node.body, inner, depth + 1), node.sort)
        return node

    return walk(term, {}, 0)


def shape(term: Term) -> Tuple:
    """Node kinds, operators, arities and sorts with every name erased"""
    if isinstance(term, Variable):
        return ('var', term.sort)
    if isinstance(term, Constant):
        return ('const', term.sort, term.value)
    if isinstance(term, Apply):
        return ('app', term.sort, term.op, len(term.args)) + tuple(shape(a) for a in term.args)
    if isinstance(term, Binder):
        return ('bind', term.kind, tuple(v.sort for v in term.bound), shape(term.body))
    raise TypeError(f"Unknown term node: {term!r}")


class Substitution(Mapping):
    """
    Sort-preserving variable-to-variable mapping.

    Images need not be distinct; variables outside the domain map to themselves.
    """

    def __init__(self, mapping: Optional[Mapping] = None):
        self._mapping: Dict[Variable, Variable] = dict(mapping or {})
        for source, image in self._mapping.items():
            if source.sort != image.sort:
                raise SubstitutionSortError(
                    f"'{source.name}' of sort {source.sort} cannot map to '{image.name}' of sort {image.sort}"
                )

    def __getitem__(self, var: Variable) -> Variable:
        return self._mapping[var]

    def __iter__(self) -> Iterator[Variable]:
        return iter(self._mapping)

    def __len__(self) -> int:
        return len(self._mapping)

    def __eq__(self, other) -> bool:
        if isinstance(other, Substitution):
            return self._mapping == other._mapping
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self._mapping.items()))

    def __repr__(self) -> str:
        pairs = ', '.join(f'{k.name}->{v.name}' for k, v in self._mapping.items())
        return f'Substitution({{{pairs}}})'

    def image(self, var: Variable) -> Variable:
        return self._mapping.get(var, var)

    def restrict(self, variables: Iterable[Variable]) -> 'Substitution':
        return Substitution({v: self._mapping[v] for v in variables if v in self._mapping})

    def is_injective_on(self, variables: Iterable[Variable]) -> bool:
        images = [self.image(v) for v in dict.fromkeys(variables)]
        return len(set(images)) == len(images)

    def inverse(self) -> 'Substitution':
        if not self.is_injective_on(self._mapping):
            raise NonInjectiveError(f"{self!r} has no inverse")
        return Substitution({v: k for k, v in self._mapping.items()})

    def to_dict(self) -> Dict[str, str]:
        return {k.name: v.name for k, v in self._mapping.items()}

    @classmethod
    def identity(cls, variables: Iterable[Variable]) -> 'Substitution':
        return cls({v: v for v in variables})


def compose(second: Substitution, first: Substitution) -> Substitution:
    """second after first: v -> second(first(v))"""
    mapping = {v: second.image(first.image(v)) for v in first}
    for v in second:
        mapping.setdefault(v, second[v])
    return Substitution(mapping)


@dataclass(frozen=True)
class Clause:
    """One top-level conjunct. `name` is assertion provenance and does not take part in equality."""
    term: Term
    free_vars: Tuple[Variable, ...]
    name: Optional[str] = field(default=None, compare=False)

    @classmethod
    def of(cls, term: Term, name: Optional[str] = None) -> 'Clause':
        if term.sort != BOOL:
            raise SortError(f"Clause must be Bool-sorted, got {term.sort}")
        return cls(term, free_variables(term), name)

    @cached_property
    def key(self) -> Term:
        """Bound-normalized term, the unit of clause containment checks"""
        return normalize_bound(self.term)

    def __str__(self) -> str:
        return str(self.term)


@dataclass(frozen=True)
class Formula:
    clauses: Tuple[Clause, ...]
    origin: str = ''
    index: int = 0

    @cached_property
    def free_vars(self) -> Tuple[Variable, ...]:
        seen: Dict[Variable, None] = {}
        for clause in self.clauses:
            for var in clause.free_vars:
                seen.setdefault(var, None)
        return tuple(seen)

    @cached_property
    def clause_keys(self) -> frozenset:
        return frozenset(c.key for c in self.clauses)

    def __len__(self) -> int:
        return len(self.clauses)


def flatten_conjunction(root: Term, name: Optional[str] = None) -> List[Clause]:
    """Split nested top-level `and` applications into clauses, left to right"""
    if root.sort != BOOL:
        raise SortError(f"Expected a Bool-sorted assertion, got {root.sort}")
    clauses: List[Clause] = []
    stack = [root]
    while stack:
        node = stack.pop()
        if isinstance(node, Apply) and node.op == 'and' and node.interpreted:
            stack.extend(reversed(node.args))
        else:
            clauses.append(Clause.of(node, name))
    return clauses


def conjoin(clauses: Iterable[Clause]) -> Term:
    """Conjunction of the clauses; the empty conjunction is true"""
    terms = tuple(c.term for c in clauses)
    if not terms:
        return Constant(BOOL, 'true')
    if len(terms) == 1:
        return terms[0]
    return Apply(BOOL, 'and', terms)


def apply_substitution(clause: Clause, substitution: Mapping) -> Clause:
    """Clause with every free variable replaced by its image"""
    return Clause.of(substitute(clause.term, substitution), clause.name)


def alpha_rename_free(clause: Clause, bijection: Substitution) -> Clause:
    if not bijection.is_injective_on(clause.free_vars):
        raise NonInjectiveError(
            f"Renaming {bijection!r} is not injective on {[v.name for v in clause.free_vars]}"
        )
    return apply_substitution(clause, bijection)


def substitution_holds(core: Iterable[Clause], substitution: Mapping, formula: Formula) -> bool:
    """True iff every substituted core clause is structurally present in the formula"""
    keys = formula.clause_keys
    for clause in core:
        if substitute(clause.key, substitution) not in keys:
            return False
    return True
