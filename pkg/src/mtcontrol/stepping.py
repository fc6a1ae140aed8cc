"""Environment step contract and the common stepping skeleton."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from mtcontrol.errors import DimensionMismatch, EpisodeFinished
from mtcontrol.seeding import RngState
from mtcontrol.spaces import BoxSpace


@dataclass
class StepResult:
    """One control interval: (observation, reward, done, info).

    info values are scalars so results serialize losslessly to JSON.
    """

    observation: np.ndarray
    reward: float
    done: bool
    info: dict[str, float] = field(default_factory=dict)

    def __iter__(self):
        # allow `obs, rew, done, info = env.step(a)`
        return iter((self.observation, self.reward, self.done, self.info))


class Env:
    """Base environment: seeded episodes, action clamping, horizon handling.

    Subclasses implement ``_reset_impl(rng) -> obs`` and
    ``_step_impl(action) -> (obs, reward, terminal, info)``; everything else
    (done bookkeeping, clamp logging, horizon cutoff) lives here. A single
    instance is not thread-safe; independent instances are.
    """

    def __init__(self, action_space: BoxSpace, observation_space: BoxSpace,
                 horizon: int, seed: int):
        if horizon < 1:
            raise ValueError("horizon must be >= 1")
        self.action_space = action_space
        self.observation_space = observation_space
        self.horizon = int(horizon)
        self.rng_state = RngState(int(seed))
        self.step_count = 0
        self._done = True  # reset() required before the first step()

    # -- public surface -----------------------------------------------------

    def seed(self, seed: int) -> None:
        """Rewind the episode stream: the next reset repeats episode 0."""
        self.rng_state.reseed(int(seed))

    def reset(self) -> np.ndarray:
        self.step_count = 0
        self._done = False
        obs = self._reset_impl(self.rng_state.spawn())
        return obs

    def step(self, action) -> StepResult:
        if self._done:
            raise EpisodeFinished("episode is done; call reset()")
        action = np.asarray(action, dtype=np.float64).ravel()
        if action.size != self.action_space.dim:
            raise DimensionMismatch(
                f"action dim {action.size} != {self.action_space.dim}")
        clamped, was_clamped = self.action_space.clamp(action)
        obs, reward, terminal, info = self._step_impl(clamped)
        self.step_count += 1
        if was_clamped:
            info["action_clamped"] = 1.0
        done = bool(terminal) or self.step_count >= self.horizon
        self._done = done
        return StepResult(obs, float(reward), done, info)

    @property
    def done(self) -> bool:
        return self._done

    def state_vector(self) -> np.ndarray:
        """Flat snapshot of the underlying physical state (for trace dumps)."""
        raise NotImplementedError

    def close(self) -> None:
        pass

    # -- subclass hooks ------------------------------------------------------

    def _reset_impl(self, rng: np.random.Generator) -> np.ndarray:
        raise NotImplementedError

    def _step_impl(self, action: np.ndarray) -> tuple[np.ndarray, float, bool, dict[str, Any]]:
        raise NotImplementedError
