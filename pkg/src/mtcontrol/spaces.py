"""Bounded real-vector action/observation space description."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from mtcontrol.errors import DimensionMismatch


@dataclass(frozen=True)
class BoxSpace:
    """Axis-aligned box in R^dim with per-component bounds.

    ``shape`` records the natural layout of emitted values (e.g. H x W x 3
    for image observations); ``dim`` is always the flattened size.
    """

    low: np.ndarray
    high: np.ndarray
    shape: tuple[int, ...] = field(default=())

    def __post_init__(self):
        low = np.asarray(self.low, dtype=np.float64).ravel()
        high = np.asarray(self.high, dtype=np.float64).ravel()
        if low.shape != high.shape:
            raise DimensionMismatch("low and high must have equal length")
        if np.any(low > high):
            raise ValueError("low[i] <= high[i] violated")
        object.__setattr__(self, "low", low)
        object.__setattr__(self, "high", high)
        shape = self.shape if self.shape else (low.size,)
        if int(np.prod(shape)) != low.size:
            raise DimensionMismatch("shape does not match bound length")
        object.__setattr__(self, "shape", tuple(int(s) for s in shape))

    @property
    def dim(self) -> int:
        return self.low.size

    @classmethod
    def symmetric(cls, bound: float, dim: int) -> "BoxSpace":
        b = float(bound)
        return cls(np.full(dim, -b), np.full(dim, b))

    @classmethod
    def unbounded(cls, dim: int, shape: tuple[int, ...] = ()) -> "BoxSpace":
        return cls(np.full(dim, -np.inf), np.full(dim, np.inf), shape)

    def clamp(self, x: np.ndarray) -> tuple[np.ndarray, bool]:
        """Clamp x into the box. Returns (clamped copy, whether anything moved)."""
        x = np.asarray(x, dtype=np.float64).ravel()
        if x.size != self.dim:
            raise DimensionMismatch(
                f"expected vector of dim {self.dim}, got {x.size}")
        clipped = np.clip(x, self.low, self.high)
        return clipped, bool(np.any(clipped != x))

    def contains(self, x: np.ndarray) -> bool:
        x = np.asarray(x, dtype=np.float64).ravel()
        return x.size == self.dim and bool(
            np.all(x >= self.low) and np.all(x <= self.high))

    def sample(self, rng: np.random.Generator) -> np.ndarray:
        low = np.where(np.isfinite(self.low), self.low, -1.0)
        high = np.where(np.isfinite(self.high), self.high, 1.0)
        return rng.uniform(low, high)
