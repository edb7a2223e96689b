"""Experience replay: a fixed-capacity FIFO ring of transitions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

REPLAY_CAPACITY = 15_000


@dataclass
class Transition:
    state_vec: np.ndarray
    action: int
    reward: float
    next_state_vec: np.ndarray
    next_mask: np.ndarray
    done: bool


class ReplayBuffer:
    def __init__(self, capacity: int = REPLAY_CAPACITY):
        if capacity < 1:
            raise ValueError("capacity must be positive")
        self.capacity = capacity
        self._ring: list[Transition | None] = [None] * capacity
        self._write = 0
        self._size = 0

    def __len__(self) -> int:
        return self._size

    def push(self, transition: Transition) -> None:
        """Insert, evicting the oldest transition once full."""
        self._ring[self._write] = transition
        self._write = (self._write + 1) % self.capacity
        self._size = min(self._size + 1, self.capacity)

    def contents(self) -> list[Transition]:
        """Stored transitions, oldest first."""
        if self._size < self.capacity:
            return [t for t in self._ring[: self._size]]
        return self._ring[self._write :] + self._ring[: self._write]

    def sample(self, batch_size: int, rng: np.random.Generator) -> list[Transition]:
        """Uniform with-replacement draw."""
        if batch_size > self._size:
            raise ValueError(f"batch_size {batch_size} exceeds buffer size {self._size}")
        idx = rng.integers(0, self._size, size=batch_size)
        if self._size < self.capacity:
            return [self._ring[int(i)] for i in idx]
        return [self._ring[int((self._write + i) % self.capacity)] for i in idx]
