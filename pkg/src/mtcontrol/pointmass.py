"""Dense-reward planar point-reach task (the learning smoke test).

Not part of the registered benchmark catalog: its family sits outside the
three benchmark families, and its only job is to give the optimizer a task it
can visibly solve in a few dozen iterations.
"""

from __future__ import annotations

import numpy as np

from mtcontrol.spaces import BoxSpace
from mtcontrol.stepping import Env

DT = 0.1
GOAL_RADIUS_RANGE = (1.5, 2.5)
ARENA_BOUND = 5.0


class PointReachEnv(Env):
    """Velocity-controlled point seeking a per-episode goal; reward exp(-dist)."""

    def __init__(self, horizon: int = 100, seed: int = 0):
        super().__init__(BoxSpace.symmetric(1.0, 2),
                         BoxSpace.symmetric(2.0 * ARENA_BOUND, 2),
                         horizon, seed)
        self.position = np.zeros(2)
        self.goal = np.zeros(2)

    def _reset_impl(self, rng: np.random.Generator) -> np.ndarray:
        self.position = np.zeros(2)
        radius = rng.uniform(*GOAL_RADIUS_RANGE)
        angle = rng.uniform(0.0, 2.0 * np.pi)
        self.goal = radius * np.array([np.cos(angle), np.sin(angle)])
        return self._observe()

    def _step_impl(self, action: np.ndarray):
        self.position = np.clip(self.position + action * DT,
                                -ARENA_BOUND, ARENA_BOUND)
        dist = float(np.hypot(*(self.goal - self.position)))
        return self._observe(), float(np.exp(-2.0 * dist)), False, {"distance": dist}

    def _observe(self) -> np.ndarray:
        return self.goal - self.position

    def state_vector(self) -> np.ndarray:
        return np.concatenate([self.position, self.goal])
