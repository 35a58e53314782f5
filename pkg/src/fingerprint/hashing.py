"""
Name-blind structural hashing of clauses and formula hash footprints.

Variables hash by sort only, so alpha-renamed clauses share one hash. Every
primitive hash is FNV-1a over a canonical byte encoding, which keeps values
stable across runs, processes and platforms.
"""
from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, List, Tuple

from terms.sorts import Sort
from terms.term import Apply, Binder, Clause, Constant, Formula, Term, Variable

MASK64 = (1 << 64) - 1
GOLDEN_RATIO_64 = 0x9E3779B97F4A7C15
FNV_OFFSET_64 = 0xCBF29CE484222325
FNV_PRIME_64 = 0x100000001B3


def fnv1a(data: bytes) -> int:
    value = FNV_OFFSET_64
    for byte in data:
        value ^= byte
        value = (value * FNV_PRIME_64) & MASK64
    return value


def combine(h1: int, h2: int) -> int:
    """Order-sensitive 64-bit hash combine"""
    return (h1 ^ ((h2 + GOLDEN_RATIO_64 + ((h1 << 6) & MASK64) + (h1 >> 2)) & MASK64)) & MASK64


@lru_cache(maxsize=4096)
def sort_hash(sort: Sort) -> int:
    return fnv1a(sort.canonical().encode('utf-8'))


@lru_cache(maxsize=4096)
def _text_hash(text: str) -> int:
    return fnv1a(text.encode('utf-8'))


def compute_ast_hash(term: Term) -> int:
    if isinstance(term, Constant):
        return combine(sort_hash(term.sort), _text_hash(term.value))
    if isinstance(term, Variable):
        return sort_hash(term.sort)
    if isinstance(term, Apply):
        value = combine(combine(sort_hash(term.sort), _text_hash(term.op)), _text_hash(str(len(term.args))))
        for arg in term.args:
            value = combine(value, compute_ast_hash(arg))
        return value
    if isinstance(term, Binder):
        value = combine(combine(sort_hash(term.sort), _text_hash(term.kind)), _text_hash(str(len(term.bound))))
        return combine(value, compute_ast_hash(term.body))
    raise TypeError(f"Cannot hash term node {term!r}")


def clause_hash(clause: Clause) -> int:
    return compute_ast_hash(clause.term)


@dataclass(frozen=True)
class HashFootprint:
    hashes: FrozenSet[int]

    def __len__(self) -> int:
        return len(self.hashes)

    def __contains__(self, value: int) -> bool:
        return value in self.hashes

    def issubset(self, other: 'HashFootprint') -> bool:
        return self.hashes <= other.hashes

    def to_list(self) -> List[int]:
        return sorted(self.hashes)


def compute_footprint(clauses: Iterable[Clause]) -> HashFootprint:
    return HashFootprint(frozenset(clause_hash(c) for c in clauses))


def compute_formula_hash_footprint(formula: Formula) -> HashFootprint:
    return compute_footprint(formula.clauses)


class ClauseBuckets:
    """Formula clause indices grouped by clause hash"""

    def __init__(self, formula: Formula):
        groups: Dict[int, List[int]] = defaultdict(list)
        for index, clause in enumerate(formula.clauses):
            groups[clause_hash(clause)].append(index)
        self._groups = {h: tuple(ids) for h, ids in groups.items()}

    def get(self, value: int) -> Tuple[int, ...]:
        return self._groups.get(value, ())

    def __len__(self) -> int:
        return len(self._groups)
