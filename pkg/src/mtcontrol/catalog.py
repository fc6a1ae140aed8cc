"""Built-in environment catalog: the benchmark's named variation grids."""

from __future__ import annotations

import math

from mtcontrol.registry import EnvSpec, Registry, default_registry
from mtcontrol.stepping import Env

NAV_HORIZON = 1000
RUNNER_HORIZON = 1000
ARM_HORIZON = 200

GRAVITY_GRID = [
    ("HopperGravityHalf-v0", 0.5),
    ("HopperGravityThreeQuarters-v0", 0.75),
    ("Hopper-v1", 1.0),
    ("HopperGravityOneAndQuarter-v0", 1.25),
    ("HopperGravityOneAndHalf-v0", 1.5),
]

MORPHOLOGY_GRID = [
    (f"Hopper{size}{part}-v0", part.lower(), scale)
    for size, scale in (("Small", 0.75), ("Big", 1.25))
    for part in ("Foot", "Leg", "Thigh", "Torso")
]

ARM_GRID = [
    ("Striker-v0", "striker", "fixed"),
    ("StrikerMovingStart-v0", "striker", "striker_moving_start"),
    ("Pusher-v0", "pusher", "fixed"),
    ("PusherMovingGoal-v0", "pusher", "pusher_moving_goal"),
]

NAV_MODALITIES = [
    # (name template, observation mode)
    ("State-Based-Navigation-2d-Map{m}-Goal{g}-v0", "state"),
    ("State-Based-Navigation-2d-Map{m}-Goal{g}-KnownGoalPosition-v0",
     "state_known_goal"),
    ("Limited-Range-Based-Navigation-2d-Map{m}-Goal{g}-v0", "range"),
    ("Limited-Range-Based-Navigation-2d-Map{m}-Goal{g}-KnownPositions-v0",
     "range_known_pos"),
    ("Image-Based-Navigation-2d-Map{m}-Goal{g}-v0", "image"),
]

N_MAPS = 10
N_GOALS = 3


def _make_runner(spec: EnvSpec, seed: int) -> Env:
    from mtcontrol.locomotion.runner import (RunnerEnv, SensorParams,
                                             VariationParams, WallParams)

    v = spec.variation
    part_scales = {k: tuple(s) for k, s in v.get("part_scales", {}).items()}
    wall = WallParams(**v["wall"]) if "wall" in v else None
    sensor = SensorParams(**v["sensor"]) if "sensor" in v else None
    variation = VariationParams(v.get("gravity_scale", 1.0), part_scales,
                                wall, sensor)
    return RunnerEnv(variation, spec.horizon, seed)


def _make_nav(spec: EnvSpec, seed: int) -> Env:
    from mtcontrol.nav2d.env import NavEnv
    from mtcontrol.nav2d.maps import bundled_map

    v = spec.variation
    return NavEnv(bundled_map(v["map"]), v["obs_mode"], v["goal_index"],
                  spec.horizon, seed)


def _make_arm(spec: EnvSpec, seed: int) -> Env:
    from mtcontrol.locomotion.arm import ArmEnv

    v = spec.variation
    return ArmEnv(v["variant"], v["task"], spec.horizon, seed)


def install_builtin_envs(registry: Registry | None = None) -> None:
    """Register the full catalog. Safe to call once per registry."""
    reg = registry or default_registry()
    if getattr(reg, "_builtin_installed", False):
        return

    sensor_record = {"n_beams": 10, "arc": math.pi / 2.0, "max_range": 10.0}
    wall_record = {"height": 0.5, "thickness": 0.2}

    for env_id, scale in GRAVITY_GRID:
        reg.register(EnvSpec(env_id, "runner", {"gravity_scale": scale},
                             RUNNER_HORIZON), _make_runner)
    for env_id, part, scale in MORPHOLOGY_GRID:
        reg.register(EnvSpec(env_id, "runner", {
            "gravity_scale": 1.0,
            "part_scales": {part: [scale, scale]},
        }, RUNNER_HORIZON), _make_runner)
    reg.register(EnvSpec("HopperWithSensor-v0", "runner",
                         {"gravity_scale": 1.0, "sensor": sensor_record},
                         RUNNER_HORIZON), _make_runner)
    reg.register(EnvSpec("HopperWall-v0", "runner",
                         {"gravity_scale": 1.0, "sensor": sensor_record,
                          "wall": wall_record},
                         RUNNER_HORIZON), _make_runner)

    for env_id, task, variant in ARM_GRID:
        reg.register(EnvSpec(env_id, "arm", {"task": task, "variant": variant},
                             ARM_HORIZON), _make_arm)

    for template, mode in NAV_MODALITIES:
        for m in range(N_MAPS):
            for g in range(N_GOALS):
                env_id = template.format(m=m, g=g)
                reg.register(EnvSpec(env_id, "nav2d", {
                    "map": f"Map{m}", "goal_index": g, "obs_mode": mode,
                }, NAV_HORIZON), _make_nav)

    reg._builtin_installed = True


def nav_env_ids(mode_template: str, goal: int | None = None) -> list[str]:
    """All map/goal instances of one navigation modality template."""
    ids = []
    for m in range(N_MAPS):
        for g in range(N_GOALS):
            if goal is not None and g != goal:
                continue
            ids.append(mode_template.format(m=m, g=g))
    return ids
