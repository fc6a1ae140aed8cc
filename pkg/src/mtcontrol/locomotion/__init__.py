"""Planar locomotion and arm environments with parameterized variations."""

from mtcontrol.locomotion.chain import PlanarChain
from mtcontrol.locomotion.runner import (
    BASE_HOPPER,
    BodyPart,
    RunnerEnv,
    RunnerModel,
    RunnerState,
    SensorParams,
    VariationParams,
    WallParams,
    build_runner,
    runner_reward,
    sample_wall,
    torso_sense,
)
from mtcontrol.locomotion.arm import (
    ArmEnv,
    ArmTask,
    arm_reward,
    build_arm_task,
)

__all__ = [
    "PlanarChain",
    "BASE_HOPPER",
    "BodyPart",
    "RunnerModel",
    "RunnerState",
    "RunnerEnv",
    "VariationParams",
    "WallParams",
    "SensorParams",
    "build_runner",
    "runner_reward",
    "sample_wall",
    "torso_sense",
    "ArmTask",
    "ArmEnv",
    "arm_reward",
    "build_arm_task",
]
