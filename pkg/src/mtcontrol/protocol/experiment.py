"""Train one policy consecutively across a group and report the four columns.

Column semantics:
  first_step          evaluation after exactly one optimizer iteration on the
                      incoming environment
  after_env_training  evaluation right after that environment's full budget
  fully_trained       evaluation of the final policy on every group member
  single_env          a fresh policy trained on that environment alone with
                      the same budget (run separately and merged in)

Every evaluation is `eval_rollouts` stochastic rollouts; its seed is derived
from (run seed, env id, policy parameter hash), so identical parameters on
the same environment reproduce identical statistics — which also makes the
last environment's after_env_training and fully_trained records coincide, as
they come from the same parameters.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

from mtcontrol.agent.policy import GaussianMlpPolicy
from mtcontrol.agent.rollout import rollout_episode
from mtcontrol.agent.trpo import TrpoConfig, TrpoTrainer
from mtcontrol.errors import NumericalFailure, UnknownEnvironment
from mtcontrol.registry import Registry, default_registry
from mtcontrol.seeding import derive_seed

STAGES = ("fully_trained", "after_env_training", "first_step", "single_env")


@dataclass(frozen=True)
class TaskGroup:
    """An ordered set of environments trained consecutively."""

    name: str
    env_ids: tuple[str, ...]
    iterations_per_env: int = 1000
    eval_rollouts: int = 20

    def validate(self, registry: Registry | None = None) -> None:
        reg = registry or default_registry()
        missing = [e for e in self.env_ids if e not in reg]
        if missing:
            raise UnknownEnvironment(f"group {self.name!r}: {missing}")


@dataclass
class EvalRecord:
    """Summary plus the raw returns it was computed from."""

    mean: float
    std: float
    returns: list[float]
    param_hash: str

    @classmethod
    def from_returns(cls, returns, params_digest: str) -> "EvalRecord":
        arr = np.asarray(returns, dtype=np.float64)
        return cls(float(arr.mean()), float(arr.std()), [float(r) for r in arr],
                   params_digest)


@dataclass
class GroupReport:
    group: str
    seed: int
    config: dict
    config_hash: str
    env_order: list[str]
    eval_rollouts: int
    records: dict[str, dict[str, EvalRecord]] = field(default_factory=dict)
    totals: dict[str, dict[str, float]] = field(default_factory=dict)
    partial: bool = False
    failure: dict | None = None

    def record(self, env_id: str, stage: str, rec: EvalRecord) -> None:
        self.records.setdefault(env_id, {})[stage] = rec

    def compute_totals(self) -> None:
        """Group totals: mean of env means, pooled (rms) std."""
        self.totals = {}
        for stage in STAGES:
            recs = [r[stage] for r in self.records.values() if stage in r]
            if not recs:
                continue
            means = np.array([r.mean for r in recs])
            variances = np.array([r.std ** 2 for r in recs])
            self.totals[stage] = {
                "mean_of_means": float(means.mean()),
                "pooled_std": float(np.sqrt(variances.mean())),
            }


def param_hash(policy: GaussianMlpPolicy) -> str:
    blob = policy.flat_params().detach().numpy().astype("<f8").tobytes()
    return hashlib.sha256(blob).hexdigest()[:16]


def config_hash(config: TrpoConfig, group: TaskGroup) -> str:
    text = repr((sorted(config.to_record().items()), group.name,
                 tuple(group.env_ids), group.iterations_per_env,
                 group.eval_rollouts))
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def evaluate(policy: GaussianMlpPolicy, env_id: str, n: int, seed: int,
             registry: Registry | None = None) -> tuple[float, float, list[float]]:
    """n stochastic rollouts; returns (mean, population std, raw returns)."""
    reg = registry or default_registry()
    eval_seed = derive_seed(seed, "eval", env_id, param_hash(policy))
    env = reg.make(env_id, eval_seed)
    rng = np.random.default_rng(derive_seed(eval_seed, "noise"))
    returns = []
    for _ in range(n):
        _, _, rewards = rollout_episode(env, policy, rng)
        returns.append(float(np.sum(rewards)))
    arr = np.asarray(returns)
    return float(arr.mean()), float(arr.std()), returns


def _fresh_policy(group: TaskGroup, seed: int, tag: str,
                  registry: Registry) -> GaussianMlpPolicy:
    probe = registry.make(group.env_ids[0], 0)
    obs_dim = probe.observation_space.dim
    act = probe.action_space
    return GaussianMlpPolicy(obs_dim, act.dim, act.low, act.high,
                             seed=derive_seed(seed, tag, group.name))


def _eval_record(policy, env_id, group, seed, registry) -> EvalRecord:
    _, _, returns = evaluate(policy, env_id, group.eval_rollouts, seed,
                             registry)
    return EvalRecord.from_returns(returns, param_hash(policy))


def run_group(group: TaskGroup, config: TrpoConfig, seed: int,
              registry: Registry | None = None,
              diagnostics_sink=None, policy_out=None) -> GroupReport:
    """The sequential protocol over one group.

    diagnostics_sink, when given, receives one dict per training iteration
    (tagged with the environment id); policy_out saves the final policy
    checkpoint. A NumericalFailure during training marks the report partial
    and keeps everything recorded so far.
    """
    reg = registry or default_registry()
    group.validate(reg)
    report = GroupReport(group.name, int(seed), config.to_record(),
                         config_hash(config, group), list(group.env_ids),
                         group.eval_rollouts)
    policy = _fresh_policy(group, seed, "group-policy", reg)
    trained: list[str] = []
    for env_id in group.env_ids:
        try:
            env = reg.make(env_id, derive_seed(seed, "train-env", env_id))
            trainer = TrpoTrainer(env, policy, config,
                                  derive_seed(seed, "train", env_id))

            def sink(diag, _env_id=env_id):
                if diagnostics_sink is not None:
                    diagnostics_sink({"env_id": _env_id, **diag})

            sink(trainer.run_iteration())
            report.record(env_id, "first_step",
                          _eval_record(policy, env_id, group, seed, reg))
            for _ in range(group.iterations_per_env - 1):
                sink(trainer.run_iteration())
            report.record(env_id, "after_env_training",
                          _eval_record(policy, env_id, group, seed, reg))
            trained.append(env_id)
        except NumericalFailure as exc:
            report.partial = True
            report.failure = {"env_id": env_id, "error": str(exc)}
            break
    for env_id in trained:
        report.record(env_id, "fully_trained",
                      _eval_record(policy, env_id, group, seed, reg))
    report.compute_totals()
    if policy_out is not None:
        policy.save(policy_out, {"group": group.name, "seed": int(seed),
                                 "config_hash": report.config_hash})
    return report


def run_single_env_baselines(group: TaskGroup, config: TrpoConfig, seed: int,
                             registry: Registry | None = None,
                             diagnostics_sink=None) -> dict[str, dict[str, EvalRecord]]:
    """Fresh policy per environment, same budget; first-iteration and final stats.

    The first-iteration record is what forward transfer is measured against.
    """
    reg = registry or default_registry()
    group.validate(reg)
    out: dict[str, dict[str, EvalRecord]] = {}
    for env_id in group.env_ids:
        policy = _fresh_policy(group, seed, f"single-policy-{env_id}", reg)
        try:
            env = reg.make(env_id, derive_seed(seed, "single-env", env_id))
            trainer = TrpoTrainer(env, policy, config,
                                  derive_seed(seed, "single-train", env_id))

            def sink(diag, _env_id=env_id):
                if diagnostics_sink is not None:
                    diagnostics_sink({"env_id": _env_id, "single_env": 1.0,
                                      **diag})

            sink(trainer.run_iteration())
            first = _eval_record(policy, env_id, group, seed, reg)
            for _ in range(group.iterations_per_env - 1):
                sink(trainer.run_iteration())
            final = _eval_record(policy, env_id, group, seed, reg)
            out[env_id] = {"first_step": first, "final": final}
        except NumericalFailure as exc:
            out[env_id] = {"error": str(exc)}  # type: ignore[dict-item]
    return out


def merge_single_env(report: GroupReport,
                     baselines: dict[str, dict[str, EvalRecord]]) -> None:
    for env_id, recs in baselines.items():
        if "final" in recs:
            report.record(env_id, "single_env", recs["final"])
            report.record(env_id, "single_env_first_step", recs["first_step"])
    report.compute_totals()


def transfer_metrics(report: GroupReport) -> dict[str, dict[str, float | None]]:
    """Derived deltas only, no claims.

    backward_delta: fully_trained - after_env_training (forgetting when < 0).
    forward_transfer: group first_step - single-env first_step; omitted (None)
    where no single-env data exists.
    """
    backward: dict[str, float | None] = {}
    forward: dict[str, float | None] = {}
    for env_id in report.env_order:
        recs = report.records.get(env_id, {})
        if "fully_trained" in recs and "after_env_training" in recs:
            backward[env_id] = recs["fully_trained"].mean \
                - recs["after_env_training"].mean
        else:
            backward[env_id] = None
        if "first_step" in recs and "single_env_first_step" in recs:
            forward[env_id] = recs["first_step"].mean \
                - recs["single_env_first_step"].mean
        else:
            forward[env_id] = None
    return {"backward_delta": backward, "forward_transfer": forward}
