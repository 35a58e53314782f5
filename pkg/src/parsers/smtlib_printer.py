import re
from fractions import Fraction
from typing import Dict, List, Tuple

from terms.sorts import BitVecSort, FloatingPointSort, INT, REAL, ROUNDING_MODE, Sort, UninterpretedSort, ArraySort
from terms.term import Apply, Binder, Constant, Formula, Term, Variable

CLAUSE_NAME_PREFIX = 'k'

_SIMPLE_SYMBOL = re.compile(r"^[A-Za-z~!@$%^&*_+=<>.?/\-][A-Za-z0-9~!@$%^&*_+=<>.?/\-]*$")


def symbol(name: str) -> str:
    if _SIMPLE_SYMBOL.match(name):
        return name
    return f'|{name}|'


def clause_name(index: int) -> str:
    return f'{CLAUSE_NAME_PREFIX}{index}'


def format_constant(constant: Constant) -> str:
    sort = constant.sort
    if sort == INT:
        value = int(constant.value)
        return str(value) if value >= 0 else f'(- {-value})'
    if sort == REAL:
        value = Fraction(constant.value)
        magnitude = abs(value)
        if magnitude.denominator == 1:
            text = f'{magnitude.numerator}.0'
        else:
            text = f'(/ {magnitude.numerator}.0 {magnitude.denominator}.0)'
        return text if value >= 0 else f'(- {text})'
    if isinstance(sort, BitVecSort):
        return f'(_ bv{constant.value} {sort.width})'
    if isinstance(sort, FloatingPointSort):
        bits = constant.value[2:]
        ebits = sort.ebits
        return f'(fp #b{bits[0]} #b{bits[1:1 + ebits]} #b{bits[1 + ebits:]})'
    return constant.value


def format_term(term: Term) -> str:
    if isinstance(term, Constant):
        return format_constant(term)
    if isinstance(term, Variable):
        return symbol(term.name)
    if isinstance(term, Apply):
        op = term.op if term.op.startswith('(_ ') else symbol(term.op)
        return f"({op} {' '.join(format_term(a) for a in term.args)})"
    if isinstance(term, Binder):
        bound = ' '.join(f'({symbol(v.name)} {v.sort.canonical()})' for v in term.bound)
        return f'({term.kind} ({bound}) {format_term(term.body)})'
    raise TypeError(f"Cannot print term node {term!r}")


def _collect_declarations(formula: Formula) -> Tuple[List[str], Dict[str, Tuple[Tuple[Sort, ...], Sort]]]:
    sorts: Dict[str, None] = {}
    functions: Dict[str, Tuple[Tuple[Sort, ...], Sort]] = {}

    def note_sort(sort: Sort):
        if isinstance(sort, UninterpretedSort) and sort != ROUNDING_MODE:
            sorts.setdefault(sort.name, None)
        elif isinstance(sort, ArraySort):
            note_sort(sort.index)
            note_sort(sort.element)

    def walk(node: Term, bound: frozenset):
        note_sort(node.sort)
        if isinstance(node, Apply):
            for arg in node.args:
                walk(arg, bound)
            if not node.interpreted:
                functions.setdefault(node.op, (tuple(a.sort for a in node.args), node.sort))
        elif isinstance(node, Binder):
            for var in node.bound:
                note_sort(var.sort)
            walk(node.body, bound | {v.name for v in node.bound})

    for var in formula.free_vars:
        note_sort(var.sort)
        functions.setdefault(var.name, ((), var.sort))
    for clause in formula.clauses:
        walk(clause.term, frozenset())
    return list(sorts), functions


def print_query(formula: Formula, name_every_clause: bool = True) -> bytes:
    """SMT-LIB 2 text asking for a verdict and, when clauses are named, an unsat core"""
    lines = ['(set-option :produce-unsat-cores true)']
    sorts, functions = _collect_declarations(formula)
    lines.extend(f'(declare-sort {symbol(name)} 0)' for name in sorts)
    for name, (domain, codomain) in functions.items():
        if domain:
            params = ' '.join(s.canonical() for s in domain)
            lines.append(f'(declare-fun {symbol(name)} ({params}) {codomain.canonical()})')
        else:
            lines.append(f'(declare-const {symbol(name)} {codomain.canonical()})')
    for index, clause in enumerate(formula.clauses):
        text = format_term(clause.term)
        if name_every_clause:
            lines.append(f'(assert (! {text} :named {clause_name(index)}))')
        else:
            lines.append(f'(assert {text})')
    lines.append('(check-sat)')
    lines.append('(get-unsat-core)')
    return ('\n'.join(lines) + '\n').encode('utf-8')
