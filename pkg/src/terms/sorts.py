from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Optional


class Sort(ABC):
    """Base class for SMT sorts. Equality is structural."""

    @abstractmethod
    def canonical(self) -> str:
        """SMT-LIB spelling of the sort, also used as its hashing encoding"""
        pass

    def __str__(self) -> str:
        return self.canonical()


@dataclass(frozen=True)
class BoolSort(Sort):
    def canonical(self) -> str:
        return 'Bool'


@dataclass(frozen=True)
class IntSort(Sort):
    def canonical(self) -> str:
        return 'Int'


@dataclass(frozen=True)
class RealSort(Sort):
    def canonical(self) -> str:
        return 'Real'


@dataclass(frozen=True)
class BitVecSort(Sort):
    width: int

    def __post_init__(self):
        if self.width < 1:
            raise ValueError(f"BitVec width must be positive, got {self.width}")

    def canonical(self) -> str:
        return f'(_ BitVec {self.width})'


@dataclass(frozen=True)
class FloatingPointSort(Sort):
    ebits: int
    sbits: int

    def __post_init__(self):
        if self.ebits < 2 or self.sbits < 2:
            raise ValueError(f"FloatingPoint needs ebits >= 2 and sbits >= 2, got ({self.ebits}, {self.sbits})")

    def canonical(self) -> str:
        return f'(_ FloatingPoint {self.ebits} {self.sbits})'


@dataclass(frozen=True)
class ArraySort(Sort):
    index: Sort
    element: Sort

    def canonical(self) -> str:
        return f'(Array {self.index.canonical()} {self.element.canonical()})'


@dataclass(frozen=True)
class UninterpretedSort(Sort):
    name: str

    def canonical(self) -> str:
        return self.name


BOOL = BoolSort()
INT = IntSort()
REAL = RealSort()

# Rounding modes only appear as arguments of FP operators
ROUNDING_MODE = UninterpretedSort('RoundingMode')


def is_numeric(sort: Optional[Sort]) -> bool:
    return isinstance(sort, (IntSort, RealSort))
