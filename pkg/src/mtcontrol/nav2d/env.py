"""Navigation environment: five observation modalities over one motion model."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from mtcontrol.nav2d.grid import (
    NavMap,
    OccupancyGrid,
    integrate_motion,
    nearest_obstacle,
    sense_rays,
)
from mtcontrol.spaces import BoxSpace
from mtcontrol.stepping import Env

NAV_OBS_MODES = ("state", "state_known_goal", "range", "range_known_pos", "image")

# Motion / sensing constants. The task definition fixes the reward structure
# and the action being a bounded xy velocity; these scales are the suite's
# choices, sized so a 32x32 map is traversable well within the horizon.
AGENT_RADIUS = 0.3
GOAL_RADIUS = 0.5
DT = 0.1
VELOCITY_BOUND = 1.0
N_BEAMS = 30
BEAM_ARC = 2.0 * math.pi
BEAM_MAX_RANGE = 10.0
SPAWN_CLEARANCE = 2.0 * AGENT_RADIUS


@dataclass
class NavState:
    position: np.ndarray
    goal: np.ndarray
    step_count: int
    agent_radius: float = AGENT_RADIUS


def nav_step_reward(collided: bool, reached_goal: bool) -> float:
    """-1 per step, -5 added on collision, +10 added on reaching the goal."""
    reward = -1.0
    if collided:
        reward -= 5.0
    if reached_goal:
        reward += 10.0
    return reward


def _spawn_centers(grid: OccupancyGrid) -> np.ndarray:
    # free-cell centers with clearance >= 2 * agent radius, cached per grid
    cached = getattr(grid, "_spawn_centers", None)
    if cached is not None:
        return cached
    centers = grid.free_cell_centers()
    c = grid.cell_size
    cx = np.clip(centers[:, 0:1], grid._obs_x0[None, :], grid._obs_x0[None, :] + c)
    cy = np.clip(centers[:, 1:2], grid._obs_y0[None, :], grid._obs_y0[None, :] + c)
    d = np.hypot(cx - centers[:, 0:1], cy - centers[:, 1:2]).min(axis=1)
    valid = centers[d >= SPAWN_CLEARANCE]
    grid._spawn_centers = valid
    return valid


def spawn(nav_map: NavMap, rng: np.random.Generator, goal_index: int) -> NavState:
    """Draw a start state: stored goal, agent uniform over clear free cells."""
    goal = np.asarray(nav_map.goals[goal_index], dtype=np.float64)
    centers = _spawn_centers(nav_map.grid)
    ok = np.hypot(centers[:, 0] - goal[0], centers[:, 1] - goal[1]) > GOAL_RADIUS
    candidates = centers[ok]
    if candidates.shape[0] == 0:
        raise ValueError(f"map {nav_map.name} has no valid spawn cell")
    pos = candidates[int(rng.integers(candidates.shape[0]))]
    return NavState(pos.copy(), goal, 0)


def build_observation(mode: str, state: NavState, grid: OccupancyGrid,
                      readouts: np.ndarray | None = None) -> np.ndarray:
    """Pure observation builder for one modality.

    state            -> [x, y, d_obst, bearing_obst]
    state_known_goal -> the above + [gx, gy]
    range            -> sensor readouts
    range_known_pos  -> readouts + [x, y, gx, gy]
    image            -> H x W x 3 tensor, channels (obstacles, agent, goal)
    """
    x, y = state.position
    if mode in ("state", "state_known_goal"):
        d, bearing = nearest_obstacle(grid, state.position)
        obs = [x, y, d, bearing]
        if mode == "state_known_goal":
            obs.extend(state.goal)
        return np.array(obs)
    if mode in ("range", "range_known_pos"):
        if readouts is None:
            readouts = sense_rays(grid, state.position, 0.0, N_BEAMS,
                                  BEAM_ARC, BEAM_MAX_RANGE)
        if mode == "range":
            return np.asarray(readouts, dtype=np.float64)
        return np.concatenate([readouts, [x, y], state.goal])
    if mode == "image":
        img = np.zeros((grid.height, grid.width, 3))
        img[:, :, 0] = grid.cells
        aix, aiy = grid.cell_index(x, y)
        gix, giy = grid.cell_index(*state.goal)
        img[aiy, aix, 1] = 1.0
        img[giy, gix, 2] = 1.0
        return img
    raise ValueError(f"unknown observation mode {mode!r}")


def _observation_space(mode: str, grid: OccupancyGrid) -> BoxSpace:
    w, h = grid.extent
    diag = math.hypot(w, h)
    if mode == "state":
        return BoxSpace(np.array([0, 0, 0, -math.pi]),
                        np.array([w, h, diag, math.pi]))
    if mode == "state_known_goal":
        return BoxSpace(np.array([0, 0, 0, -math.pi, 0, 0]),
                        np.array([w, h, diag, math.pi, w, h]))
    if mode == "range":
        return BoxSpace(np.zeros(N_BEAMS), np.ones(N_BEAMS))
    if mode == "range_known_pos":
        return BoxSpace(np.concatenate([np.zeros(N_BEAMS), [0, 0, 0, 0]]),
                        np.concatenate([np.ones(N_BEAMS), [w, h, w, h]]))
    if mode == "image":
        n = grid.height * grid.width * 3
        return BoxSpace(np.zeros(n), np.ones(n), (grid.height, grid.width, 3))
    raise ValueError(f"unknown observation mode {mode!r}")


class NavEnv(Env):
    """Velocity-controlled disc agent seeking a goal on an occupancy grid."""

    def __init__(self, nav_map: NavMap, mode: str, goal_index: int,
                 horizon: int = 1000, seed: int = 0):
        if mode not in NAV_OBS_MODES:
            raise ValueError(f"unknown observation mode {mode!r}")
        self.nav_map = nav_map
        self.grid = nav_map.grid
        self.mode = mode
        self.goal_index = int(goal_index)
        action_space = BoxSpace.symmetric(VELOCITY_BOUND, 2)
        super().__init__(action_space, _observation_space(mode, self.grid),
                         horizon, seed)
        self.state: NavState | None = None

    def _reset_impl(self, rng: np.random.Generator) -> np.ndarray:
        self.state = spawn(self.nav_map, rng, self.goal_index)
        return self._observe()

    def _step_impl(self, action: np.ndarray):
        st = self.state
        new_pos, collided = integrate_motion(self.grid, st.position,
                                             st.agent_radius, action, DT)
        st.position = new_pos
        st.step_count += 1
        reached = bool(np.hypot(*(new_pos - st.goal)) <= GOAL_RADIUS)
        reward = nav_step_reward(collided, reached)
        info = {"collided": float(collided), "reached_goal": float(reached)}
        return self._observe(), reward, reached, info

    def _observe(self) -> np.ndarray:
        readouts = None
        if self.mode in ("range", "range_known_pos"):
            readouts = sense_rays(self.grid, self.state.position, 0.0,
                                  N_BEAMS, BEAM_ARC, BEAM_MAX_RANGE)
        return build_observation(self.mode, self.state, self.grid, readouts)

    def state_vector(self) -> np.ndarray:
        st = self.state
        return np.array([st.position[0], st.position[1],
                         st.goal[0], st.goal[1], float(st.step_count)])
