import threading
from typing import Optional

DEFAULT_SUBDIVISIONS = 200_000


class WorkBudget:
    """
    Thread-safe counter of work units (quadrature subdivisions).

    A budget starts full and is drawn down by acquire(). Unlike a rate
    limiter it never refills on its own; reset() restores it.
    """

    capacity: int
    tokens: int
    lock: threading.Lock

    def __init__(self, capacity: int = DEFAULT_SUBDIVISIONS) -> None:
        """
        Initialize the budget.

        Args:
            capacity: Number of work units available
        """
        if capacity < 1:
            raise ValueError(f"Budget capacity must be positive, got {capacity}")
        self.capacity = capacity
        self.tokens = capacity
        self.lock = threading.Lock()

    def acquire(self, tokens: int = 1) -> bool:
        """
        Try to draw tokens from the budget.

        Args:
            tokens: Number of units needed

        Returns:
            True if the units were granted, False if the budget is exhausted
        """
        with self.lock:
            if self.tokens >= tokens:
                self.tokens -= tokens
                return True
            return False

    @property
    def used(self) -> int:
        with self.lock:
            return self.capacity - self.tokens

    @property
    def remaining(self) -> int:
        with self.lock:
            return self.tokens

    def reset(self, capacity: Optional[int] = None) -> None:
        """Refill the budget, optionally with a new capacity."""
        with self.lock:
            if capacity is not None:
                if capacity < 1:
                    raise ValueError(
                        f"Budget capacity must be positive, got {capacity}"
                    )
                self.capacity = capacity
            self.tokens = self.capacity
