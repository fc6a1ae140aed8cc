"""Episode collection into flat trajectory batches."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from mtcontrol.stepping import Env


@dataclass
class TrajectoryBatch:
    """Flattened rollouts: arrays indexed by a single timestep axis.

    `lengths` partitions the axis into episodes (all episodes complete:
    terminal or horizon). `values`/`advantages` are attached by the trainer.
    """

    observations: np.ndarray
    actions: np.ndarray
    rewards: np.ndarray
    lengths: list[int]
    episode_returns: list[float]
    values: np.ndarray | None = None
    advantages: np.ndarray | None = None
    infos: dict = field(default_factory=dict)

    @property
    def n_steps(self) -> int:
        return int(self.rewards.shape[0])

    @property
    def n_episodes(self) -> int:
        return len(self.lengths)

    @property
    def mean_return(self) -> float:
        return float(np.mean(self.episode_returns))


def rollout_episode(env: Env, policy, rng: np.random.Generator,
                    max_steps: int | None = None):
    """One stochastic episode. Returns (obs list, action list, reward list)."""
    observations, actions, rewards = [], [], []
    obs = env.reset()
    steps = 0
    while True:
        flat = np.asarray(obs, dtype=np.float64).ravel()
        action = policy.act(flat, rng)
        result = env.step(action)
        observations.append(flat)
        actions.append(np.asarray(action, dtype=np.float64))
        rewards.append(result.reward)
        obs = result.observation
        steps += 1
        if result.done or (max_steps is not None and steps >= max_steps):
            break
    return observations, actions, rewards


def collect_batch(env: Env, policy, min_steps: int,
                  rng: np.random.Generator) -> TrajectoryBatch:
    """Whole episodes until at least min_steps timesteps are gathered."""
    all_obs, all_act, all_rew = [], [], []
    lengths, returns = [], []
    while sum(lengths) < min_steps:
        obs, act, rew = rollout_episode(env, policy, rng)
        all_obs.extend(obs)
        all_act.extend(act)
        all_rew.extend(rew)
        lengths.append(len(rew))
        returns.append(float(np.sum(rew)))
    return TrajectoryBatch(
        observations=np.asarray(all_obs, dtype=np.float64),
        actions=np.asarray(all_act, dtype=np.float64),
        rewards=np.asarray(all_rew, dtype=np.float64),
        lengths=lengths,
        episode_returns=returns,
    )
