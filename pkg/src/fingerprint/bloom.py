from dataclasses import dataclass

from .hashing import HashFootprint

DEFAULT_BLOOM_BITS = 1024


class WidthMismatch(ValueError):
    """Bloom bitsets of different widths cannot be compared"""


@dataclass(frozen=True)
class BloomBits:
    """Fixed-width bitset projection of a hash footprint; bit i is (1 << i) of `bits`"""
    bits: int
    width: int = DEFAULT_BLOOM_BITS

    def is_set(self, index: int) -> bool:
        return bool((self.bits >> index) & 1)

    def popcount(self) -> int:
        return bin(self.bits).count('1')

    def to_hex(self) -> str:
        return format(self.bits, f'0{(self.width + 3) // 4}x')


def to_bloom_bits(footprint: HashFootprint, width: int = DEFAULT_BLOOM_BITS) -> BloomBits:
    if width < 1:
        raise ValueError(f"Bloom width must be positive, got {width}")
    bits = 0
    for value in footprint.hashes:
        bits |= 1 << (value % width)
    return BloomBits(bits, width)


def bloom_subset(core: BloomBits, formula: BloomBits) -> bool:
    """Over-approximate footprint containment: no core bit is missing from the formula"""
    if core.width != formula.width:
        raise WidthMismatch(f"Cannot compare {core.width}-bit and {formula.width}-bit Bloom bits")
    return core.bits & ~formula.bits == 0
