"""The benchmark's task-group catalog, in training order."""

from __future__ import annotations

from mtcontrol.catalog import NAV_MODALITIES, nav_env_ids
from mtcontrol.protocol.experiment import TaskGroup

_NAV_GROUP_NAMES = {
    "state": "State-Based-Navigation-2d",
    "state_known_goal": "State-Based-Navigation-2d-KnownGoalPosition",
    "range": "Limited-Range-Based-Navigation-2d",
    "range_known_pos": "Limited-Range-Based-Navigation-2d-KnownPositions",
    "image": "Image-Based-Navigation-2d",
}


def builtin_groups() -> dict[str, TaskGroup]:
    groups = [
        TaskGroup("HopperGravity", (
            "HopperGravityHalf-v0",
            "HopperGravityThreeQuarters-v0",
            "Hopper-v1",
            "HopperGravityOneAndQuarter-v0",
            "HopperGravityOneAndHalf-v0",
        ), iterations_per_env=1000),
        # larger grid, so the per-env budget drops to 500
        TaskGroup("HopperMorphology", (
            "HopperSmallFoot-v0",
            "HopperSmallLeg-v0",
            "HopperSmallThigh-v0",
            "HopperSmallTorso-v0",
            "HopperBigFoot-v0",
            "HopperBigLeg-v0",
            "HopperBigThigh-v0",
            "HopperBigTorso-v0",
        ), iterations_per_env=500),
        TaskGroup("HopperSensorWall", (
            "HopperWithSensor-v0",
            "HopperWall-v0",
        ), iterations_per_env=1000),
        TaskGroup("Striker", ("Striker-v0", "StrikerMovingStart-v0"),
                  iterations_per_env=1000),
        TaskGroup("Pusher", ("Pusher-v0", "PusherMovingGoal-v0"),
                  iterations_per_env=1000),
    ]
    for template, mode in NAV_MODALITIES:
        groups.append(TaskGroup(_NAV_GROUP_NAMES[mode],
                                tuple(nav_env_ids(template)),
                                iterations_per_env=1000))
    return {g.name: g for g in groups}


def get_group(name: str) -> TaskGroup:
    groups = builtin_groups()
    if name not in groups:
        known = ", ".join(sorted(groups))
        raise KeyError(f"unknown group {name!r}; known groups: {known}")
    return groups[name]
