from dataclasses import asdict, dataclass, replace
from typing import Any, Dict, Optional

from fingerprint.bloom import DEFAULT_BLOOM_BITS

STRATEGIES = ('cachealot', 'utopia')


class ConfigError(ValueError):
    """Invalid cache configuration"""


@dataclass(frozen=True)
class StrategyConfig:
    """
    Cache configuration for one run.

    o1 groups formula clauses by hash, o2 filters rows by per-variable domains,
    o3 replaces the materialized join by a lazy backtracking join. The utopia
    strategy has no join stage and ignores o2/o3.
    """
    strategy: str = 'cachealot'
    canonize: bool = False
    bloom_bits: int = DEFAULT_BLOOM_BITS
    o1: bool = True
    o2: bool = True
    o3: bool = True
    lookup_deadline_ms: Optional[float] = 100.0

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ConfigError(f"Unknown strategy '{self.strategy}', expected one of {', '.join(STRATEGIES)}")
        if self.bloom_bits < 1:
            raise ConfigError(f"bloom_bits must be positive, got {self.bloom_bits}")
        if self.lookup_deadline_ms is not None and self.lookup_deadline_ms < 0:
            raise ConfigError(f"lookup_deadline_ms must not be negative, got {self.lookup_deadline_ms}")

    @classmethod
    def from_settings(cls, settings, **overrides) -> 'StrategyConfig':
        """Build from a Settings instance; keyword overrides (None = keep) win"""
        values = {
            'strategy': settings.get('cache.strategy', 'cachealot'),
            'canonize': settings.get('cache.canonize', False),
            'bloom_bits': settings.get('cache.bloom_bits', DEFAULT_BLOOM_BITS),
            'o1': settings.get('cache.optimisations.o1', True),
            'o2': settings.get('cache.optimisations.o2', True),
            'o3': settings.get('cache.optimisations.o3', True),
            'lookup_deadline_ms': settings.get('cache.lookup_timeout_ms', 100),
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def with_options(self, **changes) -> 'StrategyConfig':
        return replace(self, **changes)

    def optimisation_label(self) -> str:
        enabled = [name.upper() for name in ('o1', 'o2', 'o3') if getattr(self, name)]
        return '+'.join(enabled) if enabled else 'none'

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)
