"""Trust-region policy optimization with conjugate-gradient natural gradient."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np
import torch

from mtcontrol.agent.baseline import LinearFeatureBaseline
from mtcontrol.agent.gae import compute_gae, discounted_returns
from mtcontrol.agent.policy import GaussianMlpPolicy, gaussian_kl
from mtcontrol.agent.rollout import TrajectoryBatch, collect_batch
from mtcontrol.errors import NumericalFailure
from mtcontrol.seeding import derive_seed
from mtcontrol.stepping import Env


@dataclass(frozen=True)
class TrpoConfig:
    kl_step: float = 0.01
    gae_lambda: float = 1.0
    discount: float = 0.99
    cg_damping: float = 1.0e-5
    cg_iters: int = 10
    cg_tol: float = 1.0e-10
    backtrack_ratio: float = 0.8
    max_backtracks: int = 10
    batch_size: int = 50000
    iterations: int = 1000

    def __post_init__(self):
        if self.kl_step <= 0.0:
            raise ValueError("kl_step must be positive")
        if not 0.0 <= self.gae_lambda <= 1.0:
            raise ValueError("gae_lambda must lie in [0, 1]")
        if not 0.0 < self.discount <= 1.0:
            raise ValueError("discount must lie in (0, 1]")

    def to_record(self) -> dict:
        return asdict(self)


def conjugate_gradient(apply_a: Callable[[np.ndarray], np.ndarray],
                       b: np.ndarray, iters: int = 10,
                       tol: float = 1.0e-10) -> np.ndarray:
    """Approximately solve A x = b for a symmetric positive-definite operator."""
    b = np.asarray(b, dtype=np.float64)
    x = np.zeros_like(b)
    r = b.copy()
    p = b.copy()
    rs = float(r @ r)
    if not np.isfinite(rs):
        raise NumericalFailure("non-finite right-hand side in CG")
    for _ in range(iters):
        if np.sqrt(rs) < tol:
            break
        ap = apply_a(p)
        pap = float(p @ ap)
        if not np.isfinite(pap) or pap <= 0.0:
            raise NumericalFailure("CG operator is not positive definite")
        alpha = rs / pap
        x += alpha * p
        r -= alpha * ap
        rs_new = float(r @ r)
        if not np.isfinite(rs_new):
            raise NumericalFailure("non-finite residual in CG")
        p = r + (rs_new / rs) * p
        rs = rs_new
    return x


def _flat_grad(output: torch.Tensor, params,
               create_graph: bool = False) -> torch.Tensor:
    grads = torch.autograd.grad(output, params, create_graph=create_graph,
                                allow_unused=True)
    flat = []
    for p, g in zip(params, grads):
        flat.append(torch.zeros_like(p).view(-1) if g is None else g.reshape(-1))
    return torch.cat(flat)


def fisher_vector_product(policy: GaussianMlpPolicy, obs: torch.Tensor,
                          v: np.ndarray, damping: float) -> np.ndarray:
    """(F + damping I) v, with F the average Fisher information over obs.

    Computed as the Hessian-vector product of the mean KL against a frozen
    copy of the current policy, which equals the Fisher at the current
    parameters.
    """
    params = [p for p in policy.parameters() if p.requires_grad]
    mean, log_std = policy.forward(obs)
    kl = gaussian_kl(mean.detach(), log_std.detach(), mean, log_std)
    grad = _flat_grad(kl, params, create_graph=True)
    v_t = torch.from_numpy(np.asarray(v, dtype=np.float64))
    gv = (grad * v_t).sum()
    hv = _flat_grad(gv, params)
    return hv.detach().numpy() + damping * np.asarray(v, dtype=np.float64)


def trpo_update(batch: TrajectoryBatch, policy: GaussianMlpPolicy,
                config: TrpoConfig) -> dict:
    """One constrained policy improvement step; modifies the policy in place.

    Finds the natural-gradient direction with CG, scales it to the KL
    radius, then backtracks until the mean KL stays within the step size and
    the surrogate improves. If no scale works the parameters are restored
    bit-identically and the update reports accepted=False.
    """
    if batch.advantages is None:
        raise ValueError("batch advantages must be computed before the update")
    obs = torch.from_numpy(batch.observations)
    actions = torch.from_numpy(batch.actions)
    adv = torch.from_numpy(batch.advantages)

    params = [p for p in policy.parameters() if p.requires_grad]
    with torch.no_grad():
        old_mean, old_log_std = policy.forward(obs)
        old_logp = policy.log_prob(obs, actions)

    def surrogate() -> torch.Tensor:
        logp = policy.log_prob(obs, actions)
        return (torch.exp(logp - old_logp) * adv).mean()

    def mean_kl() -> torch.Tensor:
        mean, log_std = policy.forward(obs)
        return gaussian_kl(old_mean, old_log_std, mean, log_std)

    surr_before = surrogate()
    g = _flat_grad(surr_before, params).detach().numpy()
    surr_before = surr_before.detach()
    diag = {"kl": 0.0, "surrogate_improvement": 0.0, "backtracks": 0,
            "step_scale": 0.0, "accepted": False}
    if not np.isfinite(g).all():
        raise NumericalFailure("non-finite surrogate gradient")
    if float(np.abs(g).max(initial=0.0)) == 0.0:
        return diag  # zero gradient: nothing to do, params untouched

    fvp = lambda v: fisher_vector_product(policy, obs, v, config.cg_damping)
    direction = conjugate_gradient(fvp, g, config.cg_iters, config.cg_tol)
    shs = float(direction @ fvp(direction))
    if not np.isfinite(shs) or shs <= 0.0:
        return diag
    full_step = np.sqrt(2.0 * config.kl_step / shs) * direction

    theta_old = policy.flat_params().detach().clone()
    surr_0 = float(surr_before)
    for i in range(config.max_backtracks + 1):
        scale = config.backtrack_ratio ** i
        theta = theta_old + torch.from_numpy(scale * full_step)
        policy.set_flat_params(theta)
        with torch.no_grad():
            kl = float(mean_kl())
            surr = float(surrogate())
        if np.isfinite(kl) and np.isfinite(surr) and kl <= config.kl_step \
                and surr > surr_0:
            diag.update(kl=kl, surrogate_improvement=surr - surr_0,
                        backtracks=i, step_scale=scale, accepted=True)
            return diag
    policy.set_flat_params(theta_old)
    diag["backtracks"] = config.max_backtracks + 1
    return diag


def normalize_advantages(adv: np.ndarray) -> np.ndarray:
    """Zero-mean unit-variance advantages (identically zero stays zero)."""
    adv = np.asarray(adv, dtype=np.float64)
    centered = adv - adv.mean()
    std = centered.std()
    if std < 1.0e-12:
        return np.zeros_like(adv)
    return centered / std


class TrpoTrainer:
    """Collect-estimate-update loop binding one policy to one environment."""

    def __init__(self, env: Env, policy: GaussianMlpPolicy, config: TrpoConfig,
                 seed: int):
        torch.set_num_threads(1)  # deterministic reduction order
        self.env = env
        self.policy = policy
        self.config = config
        self.baseline = LinearFeatureBaseline()
        self.noise_rng = np.random.default_rng(derive_seed(seed, "rollout-noise"))
        self.iteration = 0

    def run_iteration(self) -> dict:
        cfg = self.config
        batch = collect_batch(self.env, self.policy, cfg.batch_size,
                              self.noise_rng)
        horizon = self.env.horizon
        batch.values = self.baseline.predict(batch.observations, batch.lengths,
                                             horizon)
        raw_adv = compute_gae(batch.rewards, batch.values, batch.lengths,
                              cfg.discount, cfg.gae_lambda)
        batch.advantages = normalize_advantages(raw_adv)
        update_diag = trpo_update(batch, self.policy, cfg)
        targets = discounted_returns(batch.rewards, batch.lengths, cfg.discount)
        self.baseline.fit(batch.observations, batch.lengths, horizon, targets)
        self.iteration += 1
        diag = {
            "iteration": self.iteration,
            "mean_return": batch.mean_return,
            "n_episodes": batch.n_episodes,
            "n_steps": batch.n_steps,
        }
        diag.update(update_diag)
        return diag

    def train(self, iterations: int,
              callback: Callable[[dict], None] | None = None) -> list[dict]:
        history = []
        for _ in range(iterations):
            diag = self.run_iteration()
            history.append(diag)
            if callback is not None:
                callback(diag)
        return history
