"""Policy network: bounds, log densities, checkpoints, numpy/torch parity."""

import math

import numpy as np
import pytest
import torch

from mtcontrol.agent.policy import (GaussianMlpPolicy, gaussian_kl,
                                    gaussian_log_prob)


def test_zero_weights_give_zero_mean():
    policy = GaussianMlpPolicy(3, 2, hidden=(8,), seed=0)
    policy.set_flat_params(torch.zeros(policy.n_params))
    mean, log_std = policy.forward(torch.ones(5, 3))
    assert torch.all(mean == 0.0)        # tanh(0) = 0
    assert torch.all(log_std == 0.0)


def test_mean_bounded_by_action_box():
    low = np.array([-2.0, -0.5])
    high = np.array([2.0, 0.5])
    policy = GaussianMlpPolicy(4, 2, low, high, hidden=(16, 8), seed=1)
    obs = torch.from_numpy(np.random.default_rng(0).normal(0, 50, (200, 4)))
    mean, _ = policy.forward(obs)
    assert torch.all(mean[:, 0].abs() <= 2.0)
    assert torch.all(mean[:, 1].abs() <= 0.5)


def test_saturated_inputs_stay_finite():
    policy = GaussianMlpPolicy(3, 2, seed=2)
    obs = torch.full((4, 3), 1.0e6)
    mean, log_std = policy.forward(obs)
    assert torch.isfinite(mean).all() and torch.isfinite(log_std).all()


def test_log_prob_closed_form_at_origin():
    for d in (1, 2, 5):
        mean = torch.zeros(1, d)
        log_std = torch.zeros(1, d)
        action = torch.zeros(1, d)
        lp = gaussian_log_prob(mean, log_std, action)
        assert lp.item() == pytest.approx(-d / 2 * math.log(2 * math.pi))


def test_log_prob_maximized_at_mean():
    policy = GaussianMlpPolicy(3, 2, hidden=(8,), seed=3)
    obs = torch.from_numpy(np.random.default_rng(1).normal(size=(1, 3)))
    mean, _ = policy.forward(obs)
    lp_mode = policy.log_prob(obs, mean)
    rng = np.random.default_rng(2)
    for _ in range(50):
        other = mean + torch.from_numpy(rng.normal(size=(1, 2)))
        assert policy.log_prob(obs, other).item() <= lp_mode.item()


def test_log_prob_gradient_matches_finite_differences():
    rng = np.random.default_rng(5)
    policy = GaussianMlpPolicy(3, 2, hidden=(6, 4), seed=5)
    obs_np = rng.normal(size=(8, 3))
    act_np = rng.normal(size=(8, 2))
    obs = torch.from_numpy(obs_np)
    act = torch.from_numpy(act_np)

    def f(theta: np.ndarray) -> float:
        policy.set_flat_params(torch.from_numpy(theta))
        with torch.no_grad():
            return float(policy.log_prob(obs, act).sum())

    theta0 = policy.flat_params().detach().numpy().copy()
    lp = policy.log_prob(obs, act).sum()
    analytic = torch.autograd.grad(lp, list(policy.parameters()))
    analytic = np.concatenate([g.reshape(-1).numpy() for g in analytic])
    h = 1.0e-6
    fd = np.zeros_like(theta0)
    for i in range(theta0.size):
        e = np.zeros_like(theta0)
        e[i] = h
        fd[i] = (f(theta0 + e) - f(theta0 - e)) / (2 * h)
    policy.set_flat_params(torch.from_numpy(theta0))
    rel = np.linalg.norm(analytic - fd) / np.linalg.norm(analytic)
    assert rel <= 1.0e-5


def test_numpy_fast_path_matches_torch_mean():
    policy = GaussianMlpPolicy(5, 3, hidden=(12, 7), seed=7)
    rng = np.random.default_rng(3)
    for _ in range(20):
        obs = rng.normal(size=5)
        torch_mean = policy.forward(torch.from_numpy(obs[None]))[0][0].detach().numpy()
        assert np.allclose(policy.mean_np(obs), torch_mean, atol=1e-12)


def test_act_uses_caller_rng_deterministically():
    policy = GaussianMlpPolicy(3, 2, seed=9)
    obs = np.array([0.2, -0.1, 0.4])
    a = policy.act(obs, np.random.default_rng(11))
    b = policy.act(obs, np.random.default_rng(11))
    assert np.array_equal(a, b)


def test_checkpoint_round_trip(tmp_path):
    policy = GaussianMlpPolicy(4, 2, np.array([-2.0, -1.0]),
                               np.array([2.0, 1.0]), hidden=(10, 5), seed=13)
    path = tmp_path / "policy.ckpt"
    policy.save(path, {"note": "test"})
    header = path.read_bytes().split(b"\n", 1)[0]
    assert b"MTCONTROL-POLICY" in header and b"hidden" in header
    loaded = GaussianMlpPolicy.load(path)
    assert torch.equal(loaded.flat_params(), policy.flat_params())
    obs = torch.from_numpy(np.random.default_rng(0).normal(size=(3, 4)))
    assert torch.equal(loaded.forward(obs)[0], policy.forward(obs)[0])


def test_kl_zero_at_identical_params():
    mean = torch.from_numpy(np.random.default_rng(1).normal(size=(6, 2)))
    log_std = torch.zeros(6, 2)
    assert float(gaussian_kl(mean, log_std, mean, log_std)) == 0.0
