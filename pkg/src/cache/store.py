import logging
import threading
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from fingerprint.bloom import DEFAULT_BLOOM_BITS, BloomBits, to_bloom_bits
from fingerprint.hashing import HashFootprint, clause_hash
from terms.term import Clause, Substitution
from .canonization import canonize_clauses

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class UnsatCoreEntry:
    """A stored unsat core with its selection fingerprints precomputed at insertion"""
    id: int
    clauses: Tuple[Clause, ...]
    clause_hashes: Tuple[int, ...]
    footprint: HashFootprint
    bloom: BloomBits
    origin_formula: str
    canonical_clauses: Tuple[Clause, ...] = field(compare=False)
    canonical_renaming: Substitution = field(compare=False)

    @property
    def free_vars(self):
        return tuple(dict.fromkeys(v for c in self.clauses for v in c.free_vars))

    def __len__(self) -> int:
        return len(self.clauses)


def dedup_key(canonical_clauses: Sequence[Clause]) -> FrozenSet:
    """Canonized clause multiset"""
    return frozenset(Counter(c.key for c in canonical_clauses).items())


class CoreStore:
    """
    Insertion-ordered unsat core store.

    Writers (insert_core, reset) take the lock; readers work on the tuple
    returned by snapshot(), which later writes never mutate.
    """

    def __init__(self, bloom_bits: int = DEFAULT_BLOOM_BITS):
        if bloom_bits < 1:
            raise ValueError(f"Bloom width must be positive, got {bloom_bits}")
        self.bloom_bits = bloom_bits
        self._lock = threading.RLock()
        self._entries: Tuple[UnsatCoreEntry, ...] = ()
        self._by_key: Dict[FrozenSet, int] = {}

    def insert_core(self, clauses: Sequence[Clause], origin: str = '') -> int:
        clauses = tuple(clauses)
        if not clauses:
            raise ValueError("An unsat core needs at least one clause")
        canonical, renaming = canonize_clauses(clauses)
        key = dedup_key(canonical)
        with self._lock:
            existing = self._by_key.get(key)
            if existing is not None:
                logger.debug(f"Core from {origin} duplicates core {existing}")
                return existing
            hashes = tuple(clause_hash(c) for c in clauses)
            footprint = HashFootprint(frozenset(hashes))
            entry = UnsatCoreEntry(
                id=len(self._entries),
                clauses=clauses,
                clause_hashes=hashes,
                footprint=footprint,
                bloom=to_bloom_bits(footprint, self.bloom_bits),
                origin_formula=origin,
                canonical_clauses=canonical,
                canonical_renaming=renaming,
            )
            self._entries = self._entries + (entry,)
            self._by_key[key] = entry.id
            logger.debug(f"Stored core {entry.id} ({len(clauses)} clauses) from {origin}")
            return entry.id

    def reset(self):
        with self._lock:
            self._entries = ()
            self._by_key = {}

    def snapshot(self) -> Tuple[UnsatCoreEntry, ...]:
        return self._entries

    def get(self, core_id: int) -> Optional[UnsatCoreEntry]:
        entries = self._entries
        return entries[core_id] if 0 <= core_id < len(entries) else None

    def entries(self) -> List[UnsatCoreEntry]:
        return list(self._entries)

    def __len__(self) -> int:
        return len(self._entries)
