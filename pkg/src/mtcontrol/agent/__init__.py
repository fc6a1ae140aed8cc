"""Baseline learner: Gaussian MLP policy trained with trust-region updates."""

from mtcontrol.agent.policy import GaussianMlpPolicy
from mtcontrol.agent.gae import compute_gae
from mtcontrol.agent.baseline import LinearFeatureBaseline
from mtcontrol.agent.rollout import TrajectoryBatch, collect_batch, rollout_episode
from mtcontrol.agent.trpo import (
    TrpoConfig,
    TrpoTrainer,
    conjugate_gradient,
    fisher_vector_product,
    trpo_update,
)

__all__ = [
    "GaussianMlpPolicy",
    "compute_gae",
    "LinearFeatureBaseline",
    "TrajectoryBatch",
    "collect_batch",
    "rollout_episode",
    "TrpoConfig",
    "TrpoTrainer",
    "conjugate_gradient",
    "fisher_vector_product",
    "trpo_update",
]
