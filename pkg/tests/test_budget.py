"""Tests for the work budget."""

import threading

import pytest

from src.utils.budget import DEFAULT_SUBDIVISIONS, WorkBudget


class TestWorkBudget:
    """Test WorkBudget class."""

    def test_create_budget(self) -> None:
        """Test creation of a budget."""
        budget = WorkBudget(capacity=5)
        assert budget.capacity == 5
        assert budget.remaining == 5
        assert budget.used == 0

    def test_default_capacity(self) -> None:
        """Test the default capacity."""
        assert WorkBudget().capacity == DEFAULT_SUBDIVISIONS

    def test_acquire_until_exhausted(self) -> None:
        """Test tokens are granted until the budget runs out."""
        budget = WorkBudget(capacity=3)
        assert budget.acquire() is True
        assert budget.acquire(2) is True
        assert budget.acquire() is False
        assert budget.used == 3
        assert budget.remaining == 0

    def test_oversized_request(self) -> None:
        """Test a request larger than the remainder is refused whole."""
        budget = WorkBudget(capacity=4)
        assert budget.acquire(5) is False
        assert budget.remaining == 4

    def test_reset(self) -> None:
        """Test reset refills and can change the capacity."""
        budget = WorkBudget(capacity=2)
        budget.acquire(2)
        budget.reset()
        assert budget.remaining == 2
        budget.reset(capacity=10)
        assert budget.capacity == 10
        assert budget.remaining == 10

    @pytest.mark.parametrize("capacity", [0, -1])
    def test_invalid_capacity(self, capacity: int) -> None:
        """Test non-positive capacities are rejected."""
        with pytest.raises(ValueError, match="must be positive"):
            WorkBudget(capacity=capacity)
        with pytest.raises(ValueError, match="must be positive"):
            WorkBudget().reset(capacity=capacity)

    def test_thread_safety(self) -> None:
        """Test concurrent acquires never over-grant."""
        budget = WorkBudget(capacity=5000)
        granted = []
        lock = threading.Lock()

        def worker() -> None:
            count = sum(1 for _ in range(1000) if budget.acquire())
            with lock:
                granted.append(count)

        threads = [threading.Thread(target=worker) for _ in range(8)]
        for thread in threads:
            thread.start()
        for thread in threads:
            thread.join()

        assert sum(granted) == 5000
        assert budget.remaining == 0
