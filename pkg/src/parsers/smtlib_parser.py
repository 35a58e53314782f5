import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from terms.sorts import (
    ArraySort, BitVecSort, BOOL, FloatingPointSort, INT, REAL, ROUNDING_MODE, Sort,
    UninterpretedSort, is_numeric,
)
from terms.term import (
    Apply, Binder, Clause, Constant, Formula, SortError, Term, Variable, binder_sort,
    flatten_conjunction, free_variables,
)
from .sexpr import Atom, ParseError, SExpr, SList, SexprReader
from . import theory

logger = logging.getLogger(__name__)

Signature = Tuple[Tuple[Sort, ...], Sort]


class UnsupportedFeature(ValueError):
    """Valid SMT-LIB that lies outside the supported subset"""

    def __init__(self, command: str, line: int = 0, column: int = 0):
        super().__init__(f"{line}:{column}: unsupported feature '{command}'")
        self.command = command
        self.line = line
        self.column = column


UNSUPPORTED_COMMANDS = {
    'define-fun', 'define-fun-rec', 'define-funs-rec', 'define-sort', 'declare-datatype',
    'declare-datatypes', 'push', 'pop', 'reset', 'reset-assertions', 'check-sat-assuming',
}
# Output requests carry no formula content
IGNORED_COMMANDS = {
    'set-info', 'get-unsat-core', 'get-model', 'get-value', 'get-info', 'get-option',
    'get-assertions', 'get-assignment', 'get-proof', 'echo',
}
NAMED_SORTS = {'Bool': BOOL, 'Int': INT, 'Real': REAL, 'RoundingMode': ROUNDING_MODE}
FLOAT_SORTS = {'Float16': (5, 11), 'Float32': (8, 24), 'Float64': (11, 53), 'Float128': (15, 113)}
FP_SPECIALS = {'+zero', '-zero', '+oo', '-oo', 'NaN'}


@dataclass
class QueryFile:
    """One parsed .smt2 query"""
    path: str
    declarations: List[Tuple[str, Signature]] = field(default_factory=list)
    assertions: List[Tuple[Optional[str], Term]] = field(default_factory=list)
    logic: Optional[str] = None
    options: Dict[str, str] = field(default_factory=dict)
    sorts: List[str] = field(default_factory=list)


class _Scope:
    """Symbols bound by let and binders, plus names free in let-bound values"""

    def __init__(self, symbols: Optional[Dict[str, Term]] = None, shielded: frozenset = frozenset()):
        self.symbols = symbols or {}
        self.shielded = shielded

    def extend(self, bindings: Dict[str, Term], let: bool = False) -> '_Scope':
        shielded = self.shielded
        if let:
            shielded = shielded | {v.name for t in bindings.values() for v in free_variables(t)}
        return _Scope({**self.symbols, **bindings}, shielded)


class SmtLibParser:
    """Parser for the SMT-LIB 2 subset used by suite files"""

    def __init__(self, path: str = ''):
        self.path = path
        self.query = QueryFile(path)
        self.functions: Dict[str, Signature] = {}
        self.user_sorts: Dict[str, UninterpretedSort] = {}
        self.check_sat_count = 0
        self._fresh = 0

    def parse(self, text: str) -> QueryFile:
        reader = SexprReader(text)
        for expr in reader.read():
            if not isinstance(expr, SList) or not expr or not isinstance(expr[0], Atom):
                line, column = expr.line, expr.column
                raise ParseError(line, column, "expected a command")
            if expr[0].text == 'exit':
                break
            self._command(expr)

        if self.check_sat_count != 1:
            raise ParseError(reader.line, reader.column, f"expected exactly one check-sat, found {self.check_sat_count}")
        return self.query

    def _command(self, expr: SList):
        name = expr[0].text
        args = expr[1:]

        if name in UNSUPPORTED_COMMANDS:
            raise UnsupportedFeature(name, expr.line, expr.column)
        if name in IGNORED_COMMANDS:
            return
        if name == 'set-logic':
            self.query.logic = self._symbol(self._arg(expr, 1, 1))
        elif name == 'set-option':
            key = self._arg(expr, 1, 2)
            if not isinstance(key, Atom) or key.kind != 'keyword':
                raise ParseError(expr.line, expr.column, "set-option expects a keyword")
            self.query.options[key.text] = str(args[1])
        elif name == 'declare-sort':
            self._declare_sort(expr)
        elif name == 'declare-const':
            symbol = self._symbol(self._arg(expr, 1, 2))
            self._declare(expr, symbol, (), self.parse_sort(args[1]))
        elif name == 'declare-fun':
            symbol = self._symbol(self._arg(expr, 1, 3))
            domain = args[1]
            if not isinstance(domain, SList):
                raise ParseError(expr.line, expr.column, "declare-fun expects a parameter sort list")
            self._declare(expr, symbol, tuple(self.parse_sort(s) for s in domain), self.parse_sort(args[2]))
        elif name == 'assert':
            self._assert(self._arg(expr, 1, 1))
        elif name == 'check-sat':
            self.check_sat_count += 1
        else:
            raise ParseError(expr.line, expr.column, f"unknown command '{name}'")

    def _arg(self, expr: SList, index: int, count: int) -> SExpr:
        if len(expr) != count + 1:
            raise ParseError(expr.line, expr.column, f"'{expr[0].text}' expects {count} argument(s)")
        return expr[index]

    @staticmethod
    def _symbol(expr: SExpr) -> str:
        if not isinstance(expr, Atom) or expr.kind != 'symbol':
            raise ParseError(expr.line, expr.column, "expected a symbol")
        return expr.text

    def _declare_sort(self, expr: SList):
        if len(expr) not in (2, 3):
            raise ParseError(expr.line, expr.column, "declare-sort expects a name and an optional arity")
        symbol = self._symbol(expr[1])
        if len(expr) == 3 and (not isinstance(expr[2], Atom) or expr[2].text != '0'):
            raise UnsupportedFeature('declare-sort with parameters', expr.line, expr.column)
        if symbol in self.user_sorts or symbol in NAMED_SORTS:
            raise ParseError(expr.line, expr.column, f"sort '{symbol}' already declared")
        self.user_sorts[symbol] = UninterpretedSort(symbol)
        self.query.sorts.append(symbol)

    def _declare(self, expr: SList, symbol: str, domain: Tuple[Sort, ...], codomain: Sort):
        if symbol in self.functions:
            raise ParseError(expr.line, expr.column, f"symbol '{symbol}' already declared")
        self.functions[symbol] = (domain, codomain)
        self.query.declarations.append((symbol, (domain, codomain)))

    def _assert(self, expr: SExpr):
        name = None
        if isinstance(expr, SList) and expr and isinstance(expr[0], Atom) and expr[0].text == '!':
            term, name = self._annotated(expr, _Scope())
        else:
            term = self.parse_term(expr, _Scope())
        if name is not None and any(n == name for n, _ in self.query.assertions):
            raise ParseError(expr.line, expr.column, f"duplicate assertion name '{name}'")
        self.query.assertions.append((name, term))

    def _annotated(self, expr: SList, scope: _Scope) -> Tuple[Term, Optional[str]]:
        if len(expr) < 2:
            raise ParseError(expr.line, expr.column, "'!' expects a term and attributes")
        term = self.parse_term(expr[1], scope)
        name = None
        attributes = expr[2:]
        if len(attributes) % 2:
            raise ParseError(expr.line, expr.column, "attributes must be keyword/value pairs")
        for key, value in zip(attributes[::2], attributes[1::2]):
            if not isinstance(key, Atom) or key.text != ':named':
                raise UnsupportedFeature(f"annotation {key}", expr.line, expr.column)
            name = self._symbol(value)
        return term, name

    def parse_sort(self, expr: SExpr) -> Sort:
        if isinstance(expr, Atom):
            if expr.text in NAMED_SORTS:
                return NAMED_SORTS[expr.text]
            if expr.text in FLOAT_SORTS:
                return FloatingPointSort(*FLOAT_SORTS[expr.text])
            if expr.text in self.user_sorts:
                return self.user_sorts[expr.text]
            raise ParseError(expr.line, expr.column, f"unknown sort '{expr.text}'")
        if len(expr) >= 2 and isinstance(expr[0], Atom):
            head = expr[0].text
            try:
                if head == '_' and isinstance(expr[1], Atom) and expr[1].text == 'BitVec' and len(expr) == 3:
                    return BitVecSort(int(expr[2].text))
                if head == '_' and isinstance(expr[1], Atom) and expr[1].text == 'FloatingPoint' and len(expr) == 4:
                    return FloatingPointSort(int(expr[2].text), int(expr[3].text))
            except (AttributeError, ValueError) as e:
                raise ParseError(expr.line, expr.column, f"invalid indexed sort: {e}")
            if head == 'Array' and len(expr) == 3:
                return ArraySort(self.parse_sort(expr[1]), self.parse_sort(expr[2]))
        raise ParseError(expr.line, expr.column, "unsupported sort expression")

    def parse_term(self, expr: SExpr, scope: _Scope) -> Term:
        if isinstance(expr, Atom):
            return self._atom(expr, scope)
        if not expr:
            raise ParseError(expr.line, expr.column, "empty application")

        head = expr[0]
        if isinstance(head, Atom):
            keyword = head.text
            if keyword == 'let':
                return self._let(expr, scope)
            if keyword in ('forall', 'exists', 'lambda'):
                return self._binder(expr, scope)
            if keyword == '!':
                return self._annotated(expr, scope)[0]
            if keyword == '_':
                return self._indexed_constant(expr)
            if keyword == 'as':
                raise UnsupportedFeature('as', expr.line, expr.column)
            args = tuple(self.parse_term(a, scope) for a in expr[1:])
            if keyword in self.functions and keyword not in scope.symbols:
                return self._uninterpreted(expr, keyword, args)
            return self._interpreted(expr, keyword, (), args)

        if isinstance(head, SList) and len(head) >= 3 and isinstance(head[0], Atom) and head[0].text == '_':
            op = head[1].text
            if op not in theory.INDEXED:
                raise ParseError(head.line, head.column, f"unknown indexed operator '{op}'")
            indices = tuple(self._numeral(i) for i in head[2:])
            args = tuple(self.parse_term(a, scope) for a in expr[1:])
            return self._interpreted(expr, op, indices, args)

        raise ParseError(expr.line, expr.column, "malformed application")

    def _atom(self, atom: Atom, scope: _Scope) -> Term:
        if atom.kind == 'numeral':
            return Constant(INT, atom.text)
        if atom.kind == 'decimal':
            return _real(Fraction(atom.text))
        if atom.kind == 'binary':
            return Constant(BitVecSort(len(atom.text) - 2), str(int(atom.text[2:], 2)))
        if atom.kind == 'hex':
            return Constant(BitVecSort(4 * (len(atom.text) - 2)), str(int(atom.text[2:], 16)))
        if atom.kind == 'string':
            raise UnsupportedFeature('string literal', atom.line, atom.column)
        if atom.kind == 'keyword':
            raise ParseError(atom.line, atom.column, f"unexpected keyword '{atom.text}'")

        symbol = atom.text
        if symbol in scope.symbols:
            return scope.symbols[symbol]
        if symbol in ('true', 'false'):
            return Constant(BOOL, symbol)
        if symbol in theory.ROUNDING_MODES:
            return Constant(ROUNDING_MODE, theory.ROUNDING_MODES[symbol])
        if symbol in self.functions:
            domain, codomain = self.functions[symbol]
            if domain:
                raise ParseError(atom.line, atom.column, f"function '{symbol}' used without arguments")
            return Variable(symbol, codomain)
        raise ParseError(atom.line, atom.column, f"undeclared symbol '{symbol}'")

    def _numeral(self, expr: SExpr) -> int:
        if not isinstance(expr, Atom) or expr.kind != 'numeral':
            raise ParseError(expr.line, expr.column, "expected a numeral index")
        return int(expr.text)

    def _let(self, expr: SList, scope: _Scope) -> Term:
        if len(expr) != 3 or not isinstance(expr[1], SList) or not expr[1]:
            raise ParseError(expr.line, expr.column, "let expects a non-empty binding list and a body")
        bindings: Dict[str, Term] = {}
        for binding in expr[1]:
            if not isinstance(binding, SList) or len(binding) != 2:
                raise ParseError(expr.line, expr.column, "malformed let binding")
            name = self._symbol(binding[0])
            if name in bindings:
                raise ParseError(binding.line, binding.column, f"duplicate let binding '{name}'")
            # parallel let: values see the outer scope only
            bindings[name] = self.parse_term(binding[1], scope)
        return self.parse_term(expr[2], scope.extend(bindings, let=True))

    def _binder(self, expr: SList, scope: _Scope) -> Term:
        kind = expr[0].text
        if len(expr) != 3 or not isinstance(expr[1], SList) or not expr[1]:
            raise ParseError(expr.line, expr.column, f"{kind} expects a non-empty variable list and a body")
        bound: List[Variable] = []
        bindings: Dict[str, Term] = {}
        for decl in expr[1]:
            if not isinstance(decl, SList) or len(decl) != 2:
                raise ParseError(expr.line, expr.column, f"malformed {kind} variable declaration")
            name = self._symbol(decl[0])
            if name in bindings:
                raise ParseError(decl.line, decl.column, f"duplicate bound variable '{name}'")
            var = Variable(self._unshadowed(name, scope), self.parse_sort(decl[1]))
            bindings[name] = var
            bound.append(var)
        body = self.parse_term(expr[2], scope.extend(bindings))
        if kind != 'lambda' and body.sort != BOOL:
            raise ParseError(expr.line, expr.column, f"{kind} body must be Bool, got {body.sort}")
        bound_vars = tuple(bound)
        return Binder(kind, bound_vars, body, binder_sort(kind, bound_vars, body))

    def _unshadowed(self, name: str, scope: _Scope) -> str:
        """Rename a bound variable that would capture a name free in an expanded let value"""
        if name not in scope.shielded:
            return name
        while True:
            self._fresh += 1
            candidate = f'{name}!{self._fresh}'
            if candidate not in scope.shielded and candidate not in self.functions:
                logger.debug(f"Renamed bound variable {name} to {candidate} during let expansion")
                return candidate

    def _indexed_constant(self, expr: SList) -> Term:
        if len(expr) < 3 or not isinstance(expr[1], Atom):
            raise ParseError(expr.line, expr.column, "malformed indexed identifier")
        name = expr[1].text
        if name.startswith('bv') and name[2:].isdigit() and len(expr) == 3:
            width = self._numeral(expr[2])
            if width < 1:
                raise ParseError(expr.line, expr.column, "bit-vector width must be positive")
            return Constant(BitVecSort(width), str(int(name[2:]) % (1 << width)))
        if name in FP_SPECIALS and len(expr) == 4:
            ebits, sbits = self._numeral(expr[2]), self._numeral(expr[3])
            try:
                sort = FloatingPointSort(ebits, sbits)
            except ValueError as e:
                raise ParseError(expr.line, expr.column, str(e))
            return Constant(sort, _fp_special(name, ebits, sbits))
        raise ParseError(expr.line, expr.column, f"unsupported indexed identifier '{name}'")

    def _uninterpreted(self, expr: SList, symbol: str, args: Tuple[Term, ...]) -> Term:
        domain, codomain = self.functions[symbol]
        if not domain:
            raise ParseError(expr.line, expr.column, f"constant '{symbol}' applied to arguments")
        if tuple(a.sort for a in args) != domain:
            raise ParseError(expr.line, expr.column, f"argument sorts of '{symbol}' do not match its declaration")
        return Apply(codomain, symbol, args, interpreted=False)

    def _interpreted(self, expr: SList, op: str, indices: Tuple[int, ...], args: Tuple[Term, ...]) -> Term:
        if not args:
            raise ParseError(expr.line, expr.column, f"'{op}' needs arguments")
        if not indices and op not in theory.INDEXED and not theory.is_interpreted(op):
            raise ParseError(expr.line, expr.column, f"unknown function symbol '{op}'")
        folded = _fold_literal(op, args)
        if folded is not None:
            return folded
        try:
            sort = theory.result_sort(op, [a.sort for a in args], indices)
        except ValueError as e:
            raise ParseError(expr.line, expr.column, str(e))
        name = theory.indexed_name(op, indices) if indices else op
        return Apply(sort, name, args)


def _real(value: Fraction) -> Constant:
    return Constant(REAL, f'{value.numerator}/{value.denominator}')


def numeric_value(constant: Constant) -> Fraction:
    return Fraction(constant.value)


def _fold_literal(op: str, args: Sequence[Term]) -> Optional[Term]:
    """Literal spellings that denote a single value: (- 5), (/ 1.0 2.0), (fp #b0 #b.. #b..)"""
    if not all(isinstance(a, Constant) for a in args):
        return None
    if op == '-' and len(args) == 1 and is_numeric(args[0].sort):
        value = -numeric_value(args[0])
        return Constant(INT, str(value.numerator)) if args[0].sort == INT else _real(value)
    if op == '/' and len(args) == 2 and all(is_numeric(a.sort) for a in args):
        divisor = numeric_value(args[1])
        if divisor == 0:
            return None
        return _real(numeric_value(args[0]) / divisor)
    if op == 'fp' and len(args) == 3 and all(isinstance(a.sort, BitVecSort) for a in args):
        sign, exponent, significand = args
        if sign.sort.width != 1 or exponent.sort.width < 2 or significand.sort.width < 1:
            return None
        bits = ''.join(format(int(a.value), f'0{a.sort.width}b') for a in args)
        return Constant(FloatingPointSort(exponent.sort.width, significand.sort.width + 1), '#b' + bits)
    return None


def _fp_special(name: str, ebits: int, sbits: int) -> str:
    sign = '1' if name.startswith('-') else '0'
    if name.endswith('zero'):
        exponent, significand = '0' * ebits, '0' * (sbits - 1)
    elif name.endswith('oo'):
        exponent, significand = '1' * ebits, '0' * (sbits - 1)
    else:
        sign, exponent, significand = '0', '1' * ebits, '0' * (sbits - 2) + '1'
    return '#b' + sign + exponent + significand


def parse_query_file(data: bytes, path: str) -> QueryFile:
    """Parse one .smt2 file given as UTF-8 bytes"""
    try:
        text = data.decode('utf-8')
    except UnicodeDecodeError as e:
        raise ParseError(1, e.start + 1, f"input is not valid UTF-8: {e.reason}")
    return SmtLibParser(path).parse(text)


def to_formula(query: QueryFile, index: int = 0) -> Formula:
    """Flatten every assertion into clauses, keeping assertion names as provenance"""
    clauses: List[Clause] = []
    for name, term in query.assertions:
        if term.sort != BOOL:
            raise SortError(f"{query.path}: assertion {name or len(clauses)} has sort {term.sort}, expected Bool")
        clauses.extend(flatten_conjunction(term, name))
    return Formula(tuple(clauses), query.path, index)
