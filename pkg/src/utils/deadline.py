import time
from typing import Optional


class Deadline:
    """Monotonic-clock budget shared by the stages of one cache lookup"""

    def __init__(self, budget_seconds: Optional[float] = None):
        self.budget_seconds = budget_seconds
        self.expires_at = None if budget_seconds is None else time.monotonic() + budget_seconds

    @classmethod
    def never(cls) -> 'Deadline':
        return cls(None)

    @classmethod
    def from_millis(cls, millis: Optional[float]) -> 'Deadline':
        return cls(None if millis is None else millis / 1000.0)

    def expired(self) -> bool:
        return self.expires_at is not None and time.monotonic() >= self.expires_at
