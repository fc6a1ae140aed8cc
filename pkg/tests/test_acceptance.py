"""Acceptance suite: one test per criterion, in order, with pass/fail lines.

The absolute reward tables of 3D-engine hopper benchmarks are out of reach by
construction (different physics); these criteria pin down everything this
suite does own: reward identities, oracle equivalences, gradient exactness,
physics sanity, sensor conformance, qualitative learning outcomes, and the
protocol's schema and determinism.
"""

import math
import time

import numpy as np
import pytest
import torch

import mtcontrol as mt
from mtcontrol.agent import (GaussianMlpPolicy, TrpoConfig, TrpoTrainer,
                             collect_batch, compute_gae, conjugate_gradient)
from mtcontrol.agent.policy import gaussian_kl
from mtcontrol.agent.trpo import normalize_advantages
from mtcontrol.locomotion.runner import (SensorParams, VariationParams,
                                         WallParams, build_runner,
                                         sample_wall, torso_sense)
from mtcontrol.locomotion.runner import RunnerState
from mtcontrol.nav2d.grid import OccupancyGrid, raycast
from mtcontrol.pointmass import PointReachEnv
from mtcontrol.protocol import evaluate, get_group, run_group, \
    run_single_env_baselines, report_to_json
from mtcontrol.protocol.experiment import TaskGroup, merge_single_env
from mtcontrol.seeding import RngState, derive_seed

from test_gae_baseline import gae_brute_force
from test_nav_grid import march_oracle
from test_trpo import _fd_gradient

SEED = 0


def _report(name: str):
    print(f"[PASS] {name}")


def test_c01_navigation_reward_identity():
    """Stationary policy on every nav env returns exactly -1000.0."""
    for spec in mt.list_envs("nav2d"):
        env = mt.make(spec.id, 11)
        env.reset()
        total, steps = 0.0, 0
        done = False
        while not done:
            result = env.step(np.zeros(2))
            total += result.reward
            steps += 1
            done = result.done
        assert steps == 1000, spec.id
        assert total == -1000.0, spec.id
    _report("navigation reward identity: stationary return == -1000.0 "
            "on all 150 nav envs")


def test_c02_nav_goal_never_found():
    """Desk-scale TRPO on the range-only nav task stays at the reward floor."""
    env_id = "Limited-Range-Based-Navigation-2d-Map0-Goal0-v0"
    env = mt.make(env_id, derive_seed(SEED, "train-env", env_id))
    policy = GaussianMlpPolicy(env.observation_space.dim,
                               env.action_space.dim,
                               env.action_space.low, env.action_space.high,
                               seed=SEED)
    config = TrpoConfig(batch_size=5000, iterations=50)
    trainer = TrpoTrainer(env, policy, config, seed=SEED)
    eval_means = []
    for i in range(1, 51):
        trainer.run_iteration()
        if i == 1 or i % 10 == 0:
            mean, _, _ = evaluate(policy, env_id, 20, SEED)
            eval_means.append(mean)
    assert all(m <= -900.0 for m in eval_means), eval_means
    _report(f"qualitative nav failure: eval means {['%.1f' % m for m in eval_means]} "
            "all <= -900 (goal not found)")


def test_c03_raycaster_oracle_equivalence():
    """100 random maps x 100 rays: grid traversal vs 1e-4 m marching."""
    start = time.monotonic()
    rng = np.random.default_rng(3)
    worst = 0.0
    compared = 0
    for _ in range(100):
        cells = rng.random((16, 16)) < 0.2
        cells[0, :] = cells[-1, :] = cells[:, 0] = cells[:, -1] = True
        cells[8, 8] = False
        grid = OccupancyGrid(cells)
        free = grid.free_cell_centers()
        rays = 0
        while rays < 100:
            origin = free[rng.integers(len(free))] + rng.uniform(-0.45, 0.45, 2)
            if grid.point_in_obstacle(*origin):
                continue
            angle = rng.uniform(0.0, 2.0 * math.pi)
            d = raycast(grid, origin, angle, 10.0)
            o = march_oracle(grid, origin, angle, 10.0)
            rays += 1
            if d is None or o is None:
                edge = d if d is not None else o
                assert edge is None or edge > 10.0 - 1.0e-3
                continue
            worst = max(worst, abs(d - o))
            compared += 1
    elapsed = time.monotonic() - start
    assert worst <= 1.0e-3
    assert compared > 9000
    assert elapsed <= 60.0
    _report(f"ray-caster oracle equivalence: max deviation {worst:.2e} m "
            f"over {compared} rays in {elapsed:.1f}s")


def test_c04_gae_oracle_equivalence():
    """1000 random episodes: analytic GAE vs O(T^2) brute force."""
    rng = np.random.default_rng(4)
    worst = 0.0
    for _ in range(1000):
        n = int(rng.integers(1, 60))
        rewards = rng.normal(size=n) * 10.0
        values = rng.normal(size=n) * 5.0
        gamma = rng.uniform(0.5, 1.0)
        lam = rng.uniform(0.0, 1.0)
        fast = compute_gae(rewards, values, [n], gamma, lam)
        slow = gae_brute_force(rewards, values, [n], gamma, lam)
        worst = max(worst, float(np.max(np.abs(fast - slow))))
    assert worst <= 1.0e-10
    _report(f"GAE oracle equivalence: max abs error {worst:.2e} "
            "over 1000 episodes")


def test_c05_gradient_checks():
    """log-prob, surrogate, KL gradients vs central differences, 20 nets."""
    rng = np.random.default_rng(5)
    worst = 0.0
    for net in range(20):
        hidden = tuple(int(h) for h in rng.integers(3, 9, size=2))
        policy = GaussianMlpPolicy(3, 2, hidden=hidden, seed=net)
        obs = torch.from_numpy(rng.normal(size=(8, 3)))
        act = torch.from_numpy(rng.normal(size=(8, 2)))
        adv = torch.from_numpy(normalize_advantages(rng.normal(size=8)))
        with torch.no_grad():
            old_logp = policy.log_prob(obs, act)
            old_mean, old_log_std = policy.forward(obs)
        theta0 = policy.flat_params().detach().numpy() \
            + rng.normal(scale=1e-2, size=policy.n_params)

        def set_theta(theta):
            policy.set_flat_params(torch.from_numpy(theta))

        cases = {
            "log_prob": lambda: policy.log_prob(obs, act).sum(),
            "surrogate": lambda: (torch.exp(policy.log_prob(obs, act)
                                            - old_logp) * adv).mean(),
            "kl": lambda: gaussian_kl(old_mean, old_log_std,
                                      *policy.forward(obs)),
        }
        for name, build in cases.items():
            def scalar(theta, _b=build):
                set_theta(theta)
                with torch.no_grad():
                    return float(_b())
            set_theta(theta0)
            analytic = torch.autograd.grad(build(), list(policy.parameters()))
            analytic = np.concatenate([g.reshape(-1).numpy()
                                       for g in analytic])
            fd = _fd_gradient(scalar, theta0)
            rel = np.linalg.norm(analytic - fd) / np.linalg.norm(analytic)
            worst = max(worst, rel)
            assert rel <= 1.0e-5, (net, name, rel)
    _report(f"gradient checks: worst relative error {worst:.2e} "
            "across log-prob/surrogate/KL on 20 networks")


def test_c06_cg_correctness_and_kl_trust_region():
    """CG vs direct solve on SPD systems; accepted steps keep KL <= 0.01."""
    rng = np.random.default_rng(6)
    worst = 0.0
    for _ in range(50):
        m = rng.normal(size=(10, 10))
        a = m @ m.T + 0.1 * np.eye(10)
        b = rng.normal(size=10)
        x = conjugate_gradient(lambda v: a @ v, b, iters=60, tol=1e-14)
        worst = max(worst, float(np.linalg.norm(x - np.linalg.solve(a, b))))
    assert worst <= 1.0e-8

    env = PointReachEnv(seed=derive_seed(6, "env"))
    policy = GaussianMlpPolicy(2, 2, seed=6)
    trainer = TrpoTrainer(env, policy, TrpoConfig(batch_size=1000,
                                                  iterations=15), seed=6)
    history = trainer.train(15)
    accepted = [d for d in history if d["accepted"]]
    assert accepted, "no accepted steps in the probe run"
    max_kl = max(d["kl"] for d in accepted)
    assert max_kl <= 0.01 + 1e-12
    _report(f"CG correctness (worst residual {worst:.2e}) and trust region "
            f"(max accepted KL {max_kl:.5f} <= 0.01)")


def test_c07_physics_sanity():
    """Energy conservation, fall-time scaling, exact morphology masses."""
    model = build_runner(VariationParams())
    chain = model.to_chain()
    q = np.array([0.0, 6.0, 0.3, 0.4, -0.5, 0.2])
    qd = np.array([0.5, 1.0, 1.0, -2.0, 1.5, 2.0])
    k0, p0 = chain.energy(q, qd)
    chain.step(q, qd, np.zeros(6), 10000, 1.0e-4)
    k1, p1 = chain.energy(q, qd)
    drift = abs((k1 + p1) - (k0 + p0)) / abs(k0 + p0)
    assert drift <= 1.0e-3

    def fall_time(scale, h=2.0):
        m = build_runner(VariationParams(gravity_scale=scale))
        ch = m.to_chain()
        z0 = (m.parts["torso"].length / 2 + m.parts["thigh"].length
              + m.parts["leg"].length + m.parts["foot"].length + h)
        q = np.array([0.0, z0, 0.0, 0.0, 0.0, -np.pi / 2])
        qd = np.zeros(6)
        t = 0.0
        while t < 5.0:
            info = ch.step(q, qd, np.zeros(6), 1, 1.0e-4)
            t += 1.0e-4
            if info["contact"]:
                return t
        raise AssertionError("never landed")

    ratio = fall_time(0.5) / fall_time(1.0)
    assert ratio == pytest.approx(math.sqrt(2.0), rel=0.01)

    base = build_runner(VariationParams())
    big_foot = build_runner(VariationParams(part_scales={"foot": (1.25, 1.25)}))
    assert big_foot.total_mass == base.total_mass \
        + 0.25 * base.parts["foot"].mass  # exact float equality
    _report(f"physics sanity: energy drift {drift:.2e}, fall-time ratio "
            f"{ratio:.4f} vs sqrt(2), BigFoot mass exact")


def test_c08_sensor_spec_conformance():
    """10 readouts in [0,1], zero with no wall; wall draw stats."""
    model = build_runner(VariationParams(sensor=SensorParams(),
                                         wall=WallParams()))
    q = np.zeros(6)
    q[1] = model.standing_height
    state = RunnerState(q, np.zeros(6))
    no_wall = torso_sense(model, state, None)
    assert no_wall.shape == (10,) and np.all(no_wall == 0.0)
    rng = np.random.default_rng(8)
    for _ in range(200):
        readouts = torso_sense(model, state, float(rng.uniform(0.5, 12.0)))
        assert readouts.shape == (10,)
        assert np.all((readouts >= 0.0) & (readouts <= 1.0))

    draws = np.array([sample_wall(RngState(8).spawn())
                      for _ in range(1)])  # determinism probe
    gen = RngState(8).spawn()
    assert sample_wall(gen) == draws[0]
    gen = np.random.default_rng(88)
    many = np.array([sample_wall(gen) for _ in range(100000)])
    assert many.min() >= 1.8 and many.max() <= 3.8
    assert abs(many.mean() - 2.8) <= 0.01
    _report(f"sensor conformance: 10 readouts in [0,1], zero without wall; "
            f"wall draws in [1.8, 3.8], mean {many.mean():.4f}")


def test_c09_learning_smoke_test():
    """TRPO improves point-reach mean return >= 5x in 100 iterations."""
    start = time.monotonic()
    env = PointReachEnv(seed=derive_seed(SEED, "env"))
    policy = GaussianMlpPolicy(2, 2, seed=SEED)
    eval_rng = np.random.default_rng(derive_seed(SEED, "eval"))
    random_return = collect_batch(env, policy, 2000, eval_rng).mean_return
    trainer = TrpoTrainer(env, policy, TrpoConfig(batch_size=5000,
                                                  iterations=100), seed=SEED)
    history = trainer.train(100)
    final_env = PointReachEnv(seed=derive_seed(SEED, "env"))
    final_rng = np.random.default_rng(derive_seed(SEED, "final-eval"))
    final_return = collect_batch(final_env, policy, 2000, final_rng).mean_return
    elapsed = time.monotonic() - start
    ratio = final_return / random_return
    assert ratio >= 5.0, (random_return, final_return)
    assert all(d["kl"] <= 0.01 + 1e-12 for d in history if d["accepted"])
    assert elapsed <= 600.0
    _report(f"learning smoke test: return {random_return:.1f} -> "
            f"{final_return:.1f} ({ratio:.1f}x) in {elapsed:.0f}s")


def test_c10_protocol_schema_reproduction():
    """Desk-scale gravity group: four columns, totals, determinism, <= 30 min."""
    start = time.monotonic()
    group = get_group("HopperGravity")
    desk = TaskGroup(group.name, group.env_ids, iterations_per_env=100,
                     eval_rollouts=20)
    config = TrpoConfig(batch_size=5000, iterations=100)
    report = run_group(desk, config, seed=SEED)
    baselines = run_single_env_baselines(desk, config, seed=SEED)
    merge_single_env(report, baselines)

    for env_id in desk.env_ids:
        stages = report.records[env_id]
        for stage in ("fully_trained", "after_env_training", "first_step",
                      "single_env"):
            assert stage in stages, (env_id, stage)
            assert len(stages[stage].returns) == 20
    for stage in ("fully_trained", "after_env_training", "first_step",
                  "single_env"):
        assert stage in report.totals
    assert not report.partial

    # determinism probe at reduced scale: identical bytes across reruns
    tiny = TaskGroup(group.name, group.env_ids, iterations_per_env=2,
                     eval_rollouts=5)
    tiny_cfg = TrpoConfig(batch_size=200, iterations=2)
    once = report_to_json(run_group(tiny, tiny_cfg, seed=SEED))
    twice = report_to_json(run_group(tiny, tiny_cfg, seed=SEED))
    assert once == twice

    elapsed = time.monotonic() - start
    assert elapsed <= 1800.0
    totals = report.totals["fully_trained"]
    _report(f"protocol schema reproduction: 4 columns x 5 envs + totals "
            f"(fully-trained group mean {totals['mean_of_means']:.1f}) "
            f"deterministic, in {elapsed / 60:.1f} min")
