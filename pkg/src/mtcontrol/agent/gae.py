"""Generalized advantage estimation over complete episodes."""

from __future__ import annotations

import numpy as np


def compute_gae(rewards: np.ndarray, values: np.ndarray, lengths,
                gamma: float, lam: float) -> np.ndarray:
    """A_t = sum_k (gamma*lam)^k delta_{t+k} with delta_t = r_t + gamma V_{t+1} - V_t.

    `lengths` partitions the flat timestep axis into episodes; the recursion
    resets at each boundary and V beyond the final step of an episode is zero
    (episodes are collected to completion).
    """
    rewards = np.asarray(rewards, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    if rewards.shape != values.shape:
        raise ValueError("rewards and values must align")
    if int(np.sum(lengths)) != rewards.shape[0]:
        raise ValueError("episode lengths do not partition the batch")
    advantages = np.empty_like(rewards)
    start = 0
    for n in lengths:
        end = start + n
        running = 0.0
        for t in range(end - 1, start - 1, -1):
            next_value = values[t + 1] if t + 1 < end else 0.0
            delta = rewards[t] + gamma * next_value - values[t]
            running = delta + gamma * lam * running
            advantages[t] = running
        start = end
    return advantages


def discounted_returns(rewards: np.ndarray, lengths, gamma: float) -> np.ndarray:
    """Per-step discounted reward-to-go, reset at episode boundaries."""
    rewards = np.asarray(rewards, dtype=np.float64)
    out = np.empty_like(rewards)
    start = 0
    for n in lengths:
        end = start + n
        running = 0.0
        for t in range(end - 1, start - 1, -1):
            running = rewards[t] + gamma * running
            out[t] = running
        start = end
    return out
