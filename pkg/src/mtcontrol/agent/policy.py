"""Diagonal-Gaussian policy over a small MLP.

Hidden layers use rectified-linear units; the mean head is a tanh scaled to
the action bounds; the log-stds are free state-independent parameters. All
math is float64. Rollout-time action sampling runs through a cached numpy
mirror of the weights (an order of magnitude faster than per-step torch
calls); gradients always go through torch.
"""

from __future__ import annotations

import json
import math

import numpy as np
import torch
from torch import nn

from mtcontrol.errors import DimensionMismatch
from mtcontrol.seeding import derive_seed

torch.set_default_dtype(torch.float64)

DEFAULT_HIDDEN = (100, 50, 25)

_CHECKPOINT_MAGIC = "MTCONTROL-POLICY"
_CHECKPOINT_VERSION = 1


def _orthogonal(rng: np.random.Generator, rows: int, cols: int,
                gain: float) -> np.ndarray:
    a = rng.standard_normal((rows, cols))
    u, _, vt = np.linalg.svd(a, full_matrices=False)
    w = u if u.shape == (rows, cols) else vt
    return gain * w


class GaussianMlpPolicy(nn.Module):
    """pi(a|s) = N(scale * tanh(mlp(s)), diag(exp(log_std))^2)."""

    def __init__(self, obs_dim: int, action_dim: int,
                 action_low=None, action_high=None,
                 hidden: tuple[int, ...] = DEFAULT_HIDDEN, seed: int = 0):
        super().__init__()
        self.obs_dim = int(obs_dim)
        self.action_dim = int(action_dim)
        self.hidden = tuple(int(h) for h in hidden)
        low = np.full(action_dim, -1.0) if action_low is None \
            else np.asarray(action_low, dtype=np.float64)
        high = np.full(action_dim, 1.0) if action_high is None \
            else np.asarray(action_high, dtype=np.float64)
        self.register_buffer("_scale", torch.from_numpy((high - low) / 2.0))
        self.register_buffer("_center", torch.from_numpy((high + low) / 2.0))

        rng = np.random.default_rng(derive_seed(seed, "policy-init"))
        dims = (self.obs_dim, *self.hidden, self.action_dim)
        layers = []
        for i in range(len(dims) - 1):
            lin = nn.Linear(dims[i], dims[i + 1])
            gain = math.sqrt(2.0) if i < len(dims) - 2 else 0.01
            with torch.no_grad():
                lin.weight.copy_(torch.from_numpy(
                    _orthogonal(rng, dims[i + 1], dims[i], gain)))
                lin.bias.zero_()
            layers.append(lin)
        self.layers = nn.ModuleList(layers)
        self.log_std = nn.Parameter(torch.zeros(self.action_dim))
        self._np_cache: list[tuple[np.ndarray, np.ndarray]] | None = None

    # -- torch paths (differentiable) ----------------------------------------

    def forward(self, obs: torch.Tensor) -> tuple[torch.Tensor, torch.Tensor]:
        """Mean (bounded by the action box) and broadcast log-std."""
        x = obs
        for lin in self.layers[:-1]:
            x = torch.relu(lin(x))
        mean = torch.tanh(self.layers[-1](x)) * self._scale + self._center
        log_std = self.log_std.expand_as(mean)
        return mean, log_std

    def log_prob(self, obs: torch.Tensor, actions: torch.Tensor) -> torch.Tensor:
        mean, log_std = self.forward(obs)
        return gaussian_log_prob(mean, log_std, actions)

    def flat_params(self) -> torch.Tensor:
        return nn.utils.parameters_to_vector(self.parameters())

    def set_flat_params(self, vec: torch.Tensor) -> None:
        nn.utils.vector_to_parameters(vec, self.parameters())
        self._np_cache = None

    @property
    def n_params(self) -> int:
        return int(sum(p.numel() for p in self.parameters()))

    # -- numpy fast path (rollouts) -------------------------------------------

    def _weights_np(self):
        if self._np_cache is None:
            with torch.no_grad():
                self._np_cache = [
                    (lin.weight.numpy().copy(), lin.bias.numpy().copy())
                    for lin in self.layers]
                self._std_np = np.exp(self.log_std.numpy().copy())
                self._scale_np = self._scale.numpy().copy()
                self._center_np = self._center.numpy().copy()
        return self._np_cache

    def mean_np(self, obs: np.ndarray) -> np.ndarray:
        weights = self._weights_np()
        x = np.asarray(obs, dtype=np.float64).ravel()
        if x.size != self.obs_dim:
            raise DimensionMismatch(
                f"observation dim {x.size} != {self.obs_dim}")
        for w, b in weights[:-1]:
            x = np.maximum(w @ x + b, 0.0)
        w, b = weights[-1]
        return np.tanh(w @ x + b) * self._scale_np + self._center_np

    def act(self, obs: np.ndarray,
            rng: np.random.Generator) -> np.ndarray:
        """Sample an action; all stochasticity comes from the caller's rng."""
        mean = self.mean_np(obs)
        return mean + self._std_np * rng.standard_normal(self.action_dim)

    # -- checkpoints -----------------------------------------------------------

    def save(self, path, extra: dict | None = None) -> None:
        """Versioned binary checkpoint with a one-line plain-text header."""
        header = {
            "magic": _CHECKPOINT_MAGIC,
            "version": _CHECKPOINT_VERSION,
            "obs_dim": self.obs_dim,
            "action_dim": self.action_dim,
            "hidden": list(self.hidden),
            "activation": ["relu", "tanh-out"],
            "action_low": (self._center - self._scale).tolist(),
            "action_high": (self._center + self._scale).tolist(),
        }
        if extra:
            header.update(extra)
        with open(path, "wb") as fh:
            fh.write(json.dumps(header, sort_keys=True).encode() + b"\n")
            fh.write(self.flat_params().detach().numpy().astype("<f8").tobytes())

    @classmethod
    def load(cls, path) -> "GaussianMlpPolicy":
        with open(path, "rb") as fh:
            header = json.loads(fh.readline().decode())
            if header.get("magic") != _CHECKPOINT_MAGIC:
                raise ValueError(f"{path} is not a policy checkpoint")
            if header.get("version") != _CHECKPOINT_VERSION:
                raise ValueError(f"unsupported checkpoint version {header.get('version')}")
            blob = fh.read()
        policy = cls(header["obs_dim"], header["action_dim"],
                     np.array(header["action_low"]),
                     np.array(header["action_high"]),
                     tuple(header["hidden"]))
        vec = np.frombuffer(blob, dtype="<f8").copy()
        if vec.size != policy.n_params:
            raise ValueError("checkpoint parameter count mismatch")
        policy.set_flat_params(torch.from_numpy(vec))
        return policy


def gaussian_log_prob(mean: torch.Tensor, log_std: torch.Tensor,
                      actions: torch.Tensor) -> torch.Tensor:
    """Row-wise diagonal Gaussian log density."""
    var = torch.exp(2.0 * log_std)
    return (-0.5 * ((actions - mean) ** 2 / var).sum(dim=-1)
            - log_std.sum(dim=-1)
            - 0.5 * mean.shape[-1] * math.log(2.0 * math.pi))


def gaussian_kl(mean_p: torch.Tensor, log_std_p: torch.Tensor,
                mean_q: torch.Tensor, log_std_q: torch.Tensor) -> torch.Tensor:
    """Mean over rows of KL(p || q) for diagonal Gaussians."""
    var_p = torch.exp(2.0 * log_std_p)
    var_q = torch.exp(2.0 * log_std_q)
    kl = (log_std_q - log_std_p
          + (var_p + (mean_p - mean_q) ** 2) / (2.0 * var_q) - 0.5)
    return kl.sum(dim=-1).mean()
