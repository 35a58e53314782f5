"""Result sorts of the interpreted SMT-LIB operators the frontend accepts"""
from typing import Sequence, Tuple

from terms.sorts import (
    ArraySort, BitVecSort, BOOL, FloatingPointSort, INT, REAL, Sort, is_numeric,
)
from terms.term import SortError

BOOL_OPS = {'not', 'and', 'or', 'xor', '=>'}
CHAINABLE = {'=', 'distinct'}
ARITH_OPS = {'+', '-', '*'}
INT_OPS = {'div', 'mod', 'abs'}
ARITH_COMPARISONS = {'<', '<=', '>', '>='}

BV_SAME = {
    'bvnot', 'bvneg', 'bvand', 'bvor', 'bvxor', 'bvnand', 'bvnor', 'bvxnor',
    'bvadd', 'bvsub', 'bvmul', 'bvudiv', 'bvurem', 'bvsdiv', 'bvsrem', 'bvsmod',
    'bvshl', 'bvlshr', 'bvashr',
}
BV_PREDICATES = {'bvult', 'bvule', 'bvugt', 'bvuge', 'bvslt', 'bvsle', 'bvsgt', 'bvsge'}
BV_INDEXED = {'extract', 'zero_extend', 'sign_extend', 'rotate_left', 'rotate_right', 'repeat'}

FP_SAME = {'fp.abs', 'fp.neg', 'fp.rem', 'fp.min', 'fp.max'}
FP_ROUNDED = {'fp.add', 'fp.sub', 'fp.mul', 'fp.div', 'fp.fma', 'fp.sqrt', 'fp.roundToIntegral'}
FP_PREDICATES = {
    'fp.leq', 'fp.lt', 'fp.geq', 'fp.gt', 'fp.eq',
    'fp.isNormal', 'fp.isSubnormal', 'fp.isZero', 'fp.isInfinite', 'fp.isNaN',
    'fp.isNegative', 'fp.isPositive',
}
FP_INDEXED = {'to_fp', 'to_fp_unsigned', 'fp.to_ubv', 'fp.to_sbv'}

ROUNDING_MODES = {
    'RNE': 'RNE', 'roundNearestTiesToEven': 'RNE',
    'RNA': 'RNA', 'roundNearestTiesToAway': 'RNA',
    'RTP': 'RTP', 'roundTowardPositive': 'RTP',
    'RTN': 'RTN', 'roundTowardNegative': 'RTN',
    'RTZ': 'RTZ', 'roundTowardZero': 'RTZ',
}

INDEXED = BV_INDEXED | FP_INDEXED


def is_interpreted(op: str) -> bool:
    return op in (
        BOOL_OPS | CHAINABLE | ARITH_OPS | INT_OPS | ARITH_COMPARISONS | BV_SAME | BV_PREDICATES
        | FP_SAME | FP_ROUNDED | FP_PREDICATES
        | {'ite', '/', 'to_real', 'to_int', 'is_int', 'concat', 'bvcomp', 'select', 'store', 'fp.to_real', 'fp'}
    )


def _require(condition: bool, op: str, message: str):
    if not condition:
        raise SortError(f"'{op}': {message}")


def _width(sort: Sort, op: str) -> int:
    _require(isinstance(sort, BitVecSort), op, f"expected a bit-vector argument, got {sort}")
    return sort.width


def indexed_name(op: str, indices: Sequence[int]) -> str:
    return f"(_ {op} {' '.join(str(i) for i in indices)})"


def result_sort(op: str, args: Sequence[Sort], indices: Tuple[int, ...] = ()) -> Sort:
    """Sort of `(op args...)`, or SortError when the arguments do not fit"""
    n = len(args)

    if op in BOOL_OPS:
        _require(all(s == BOOL for s in args), op, "arguments must be Bool")
        _require(n == 1 if op == 'not' else n >= 1, op, f"wrong number of arguments ({n})")
        return BOOL
    if op in CHAINABLE:
        _require(n >= 2, op, "needs at least two arguments")
        first = args[0]
        if is_numeric(first):
            _require(all(is_numeric(s) for s in args), op, "mixed numeric and non-numeric arguments")
        else:
            _require(all(s == first for s in args), op, "arguments must share one sort")
        return BOOL
    if op == 'ite':
        _require(n == 3 and args[0] == BOOL, op, "expects (ite Bool T T)")
        if is_numeric(args[1]) and is_numeric(args[2]):
            return REAL if REAL in (args[1], args[2]) else INT
        _require(args[1] == args[2], op, "branches must share one sort")
        return args[1]

    if op in ARITH_OPS or op in ARITH_COMPARISONS:
        _require(all(is_numeric(s) for s in args), op, "arguments must be Int or Real")
        if op in ARITH_COMPARISONS:
            _require(n >= 2, op, "needs at least two arguments")
            return BOOL
        _require(n >= 2 or op == '-', op, "needs at least two arguments")
        return REAL if REAL in args else INT
    if op in INT_OPS:
        _require(all(s == INT for s in args), op, "arguments must be Int")
        _require(n == (1 if op == 'abs' else 2), op, f"wrong number of arguments ({n})")
        return INT
    if op == '/':
        _require(n >= 2 and all(is_numeric(s) for s in args), op, "expects Real arguments")
        return REAL
    if op == 'to_real':
        _require(n == 1 and args[0] == INT, op, "expects one Int")
        return REAL
    if op == 'to_int':
        _require(n == 1 and args[0] == REAL, op, "expects one Real")
        return INT
    if op == 'is_int':
        _require(n == 1 and args[0] == REAL, op, "expects one Real")
        return BOOL

    if op in BV_SAME:
        _require(n >= 1, op, "needs arguments")
        width = _width(args[0], op)
        _require(all(_width(s, op) == width for s in args), op, "bit-vector widths differ")
        return args[0]
    if op in BV_PREDICATES:
        _require(n == 2 and _width(args[0], op) == _width(args[1], op), op, "expects two bit-vectors of one width")
        return BOOL
    if op == 'concat':
        _require(n >= 2, op, "needs at least two arguments")
        return BitVecSort(sum(_width(s, op) for s in args))
    if op == 'bvcomp':
        _require(n == 2 and _width(args[0], op) == _width(args[1], op), op, "expects two bit-vectors of one width")
        return BitVecSort(1)
    if op in BV_INDEXED:
        _require(n == 1, op, "expects one argument")
        width = _width(args[0], op)
        if op == 'extract':
            _require(len(indices) == 2 and width > indices[0] >= indices[1] >= 0, op, f"bad indices {indices}")
            return BitVecSort(indices[0] - indices[1] + 1)
        _require(len(indices) == 1, op, f"bad indices {indices}")
        if op in ('zero_extend', 'sign_extend'):
            return BitVecSort(width + indices[0])
        if op == 'repeat':
            _require(indices[0] >= 1, op, "repeat count must be positive")
            return BitVecSort(width * indices[0])
        return args[0]

    if op == 'select':
        _require(n == 2 and isinstance(args[0], ArraySort) and args[0].index == args[1], op, "expects (select (Array I E) I)")
        return args[0].element
    if op == 'store':
        _require(
            n == 3 and isinstance(args[0], ArraySort) and args[0].index == args[1] and args[0].element == args[2],
            op, "expects (store (Array I E) I E)",
        )
        return args[0]

    if op == 'fp':
        _require(n == 3 and all(isinstance(s, BitVecSort) for s in args) and args[0].width == 1, op,
                 "expects (fp (_ BitVec 1) (_ BitVec eb) (_ BitVec i))")
        return FloatingPointSort(args[1].width, args[2].width + 1)
    if op in FP_SAME:
        _require(n >= 1 and all(isinstance(s, FloatingPointSort) and s == args[0] for s in args), op,
                 "expects floating-point arguments of one sort")
        return args[0]
    if op in FP_ROUNDED:
        _require(n >= 2 and isinstance(args[1], FloatingPointSort), op, "expects a rounding mode then floats")
        return args[1]
    if op in FP_PREDICATES:
        _require(n >= 1 and all(isinstance(s, FloatingPointSort) for s in args), op, "expects floating-point arguments")
        return BOOL
    if op == 'fp.to_real':
        _require(n == 1 and isinstance(args[0], FloatingPointSort), op, "expects one float")
        return REAL
    if op in ('to_fp', 'to_fp_unsigned'):
        _require(len(indices) == 2, op, f"bad indices {indices}")
        return FloatingPointSort(indices[0], indices[1])
    if op in ('fp.to_ubv', 'fp.to_sbv'):
        _require(len(indices) == 1, op, f"bad indices {indices}")
        return BitVecSort(indices[0])

    raise SortError(f"unknown operator '{op}'")
