"""Continuous 2D navigation on occupancy-grid maps."""

from mtcontrol.nav2d.grid import (
    NavMap,
    OccupancyGrid,
    integrate_motion,
    load_map,
    nearest_obstacle,
    parse_map_file,
    raycast,
    sense_rays,
)
from mtcontrol.nav2d.env import (
    NAV_OBS_MODES,
    NavEnv,
    NavState,
    build_observation,
    nav_step_reward,
    spawn,
)
from mtcontrol.nav2d.maps import bundled_map, bundled_map_names

__all__ = [
    "OccupancyGrid",
    "NavMap",
    "load_map",
    "parse_map_file",
    "raycast",
    "sense_rays",
    "nearest_obstacle",
    "integrate_motion",
    "NavEnv",
    "NavState",
    "NAV_OBS_MODES",
    "build_observation",
    "nav_step_reward",
    "spawn",
    "bundled_map",
    "bundled_map_names",
]
