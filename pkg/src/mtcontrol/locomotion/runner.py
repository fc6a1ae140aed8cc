"""Hopper-topology planar runner with gravity/morphology/wall/sensor variations."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from mtcontrol.errors import InvalidVariation
from mtcontrol.locomotion.chain import PRISM_X, PRISM_Z, REVOLUTE, PlanarChain
from mtcontrol.spaces import BoxSpace
from mtcontrol.stepping import Env

G_EARTH = 9.81

PART_NAMES = ("torso", "thigh", "leg", "foot")

WALL_X_RANGE = (1.8, 3.8)   # wall draw: uniform this far ahead of the start

SENSOR_N_BEAMS = 10
SENSOR_ARC = math.pi / 2.0
SENSOR_MAX_RANGE = 10.0

# Control runs at 10 ms with ten 1 ms internal steps: stable for the penalty
# contact stiffness at these masses.
CONTROL_DT = 1.0e-2
SUBSTEPS = 10
INTERNAL_DT = CONTROL_DT / SUBSTEPS

ALIVE_BONUS = 1.0
CONTROL_COST = 1.0e-3
MIN_HEIGHT_FRACTION = 0.7
MAX_PITCH = 1.0


@dataclass(frozen=True)
class WallParams:
    enabled: bool = True
    height: float = 0.5
    thickness: float = 0.2


@dataclass(frozen=True)
class SensorParams:
    n_beams: int = SENSOR_N_BEAMS
    arc: float = SENSOR_ARC
    max_range: float = SENSOR_MAX_RANGE


@dataclass(frozen=True)
class VariationParams:
    """One point in the variation space of the runner family.

    part_scales maps a body part to (mass_scale, width_scale); lengths are
    never scaled.
    """

    gravity_scale: float = 1.0
    part_scales: dict = field(default_factory=dict)
    wall: WallParams | None = None
    sensor: SensorParams | None = None

    def to_record(self) -> dict:
        rec: dict = {"gravity_scale": self.gravity_scale}
        if self.part_scales:
            rec["part_scales"] = {k: list(v) for k, v in self.part_scales.items()}
        if self.wall is not None:
            rec["wall"] = {"height": self.wall.height,
                           "thickness": self.wall.thickness}
        if self.sensor is not None:
            rec["sensor"] = {"n_beams": self.sensor.n_beams,
                             "arc": self.sensor.arc,
                             "max_range": self.sensor.max_range}
        return rec


@dataclass(frozen=True)
class BodyPart:
    mass: float       # kg
    length: float     # m
    width: float      # m
    inertia: float    # kg m^2, about the CoM

    @classmethod
    def from_geometry(cls, mass: float, length: float, width: float) -> "BodyPart":
        return cls(mass, length, width, mass * (length**2 + width**2) / 12.0)


# Base dimensions. Masses are dyadic rationals so that 0.75x / 1.25x scaling
# and mass totals stay exact in binary floating point.
BASE_HOPPER: dict[str, BodyPart] = {
    "torso": BodyPart.from_geometry(3.5, 0.4, 0.05),
    "thigh": BodyPart.from_geometry(2.0, 0.45, 0.05),
    "leg": BodyPart.from_geometry(1.5, 0.5, 0.04),
    "foot": BodyPart.from_geometry(1.0, 0.375, 0.06),
}

TORQUE_LIMITS = np.array([60.0, 60.0, 60.0])   # hip, knee, ankle (N m)


@dataclass(frozen=True)
class RunnerModel:
    """Scaled hopper: four parts, three actuated revolute joints."""

    parts: dict[str, BodyPart]
    gravity: float                      # m/s^2, negative down
    torque_limits: np.ndarray = field(default_factory=lambda: TORQUE_LIMITS.copy())
    variation: VariationParams = field(default_factory=VariationParams)

    @property
    def total_mass(self) -> float:
        return math.fsum(p.mass for p in self.parts.values())

    @property
    def standing_height(self) -> float:
        # torso-center height with thigh and leg vertical and the foot flat
        return (self.parts["torso"].length / 2.0 + self.parts["thigh"].length
                + self.parts["leg"].length)

    def to_chain(self) -> PlanarChain:
        t, th, lg, ft = (self.parts[n] for n in PART_NAMES)
        jtype = np.array([PRISM_X, PRISM_Z, REVOLUTE, REVOLUTE, REVOLUTE,
                          REVOLUTE])
        anchor = np.array([
            [0.0, 0.0],                  # root x
            [0.0, 0.0],                  # root z
            [0.0, 0.0],                  # torso pitch; frame at torso center
            [0.0, -t.length / 2.0],      # hip at torso bottom
            [0.0, -th.length],           # knee at thigh end
            [0.0, -lg.length],           # ankle at leg end
        ])
        mass = np.array([0.0, 0.0, t.mass, th.mass, lg.mass, ft.mass])
        com = np.array([
            [0.0, 0.0],
            [0.0, 0.0],
            [0.0, 0.0],
            [0.0, -th.length / 2.0],
            [0.0, -lg.length / 2.0],
            [ft.length / 2.0, 0.0],      # foot extends forward from the ankle
        ])
        inertia = np.array([0.0, 0.0, t.inertia, th.inertia, lg.inertia,
                            ft.inertia])
        # penalty contact at the foot segment's endpoints (heel = ankle, toe)
        contact_body = np.array([5, 5])
        contact_local = np.array([[0.0, 0.0], [ft.length, 0.0]])
        return PlanarChain(jtype, anchor, mass, com, inertia, self.gravity,
                           contact_body, contact_local)


def build_runner(variation: VariationParams) -> RunnerModel:
    """Instantiate the hopper under one variation point."""
    if variation.gravity_scale <= 0.0:
        raise InvalidVariation("gravity_scale must be positive")
    parts = {}
    for name in PART_NAMES:
        base = BASE_HOPPER[name]
        m_scale, w_scale = variation.part_scales.get(name, (1.0, 1.0))
        if m_scale <= 0.0 or w_scale <= 0.0:
            raise InvalidVariation(f"non-positive scale for part {name!r}")
        parts[name] = BodyPart.from_geometry(base.mass * m_scale, base.length,
                                             base.width * w_scale)
    unknown = set(variation.part_scales) - set(PART_NAMES)
    if unknown:
        raise InvalidVariation(f"unknown body parts: {sorted(unknown)}")
    return RunnerModel(parts, -G_EARTH * variation.gravity_scale,
                       variation=variation)


@dataclass
class RunnerState:
    """Generalized state: q = (x, z, pitch, hip, knee, ankle)."""

    q: np.ndarray
    qd: np.ndarray
    t: float = 0.0


def runner_reward(prev: RunnerState, next_state: RunnerState,
                  action: np.ndarray, dt: float,
                  standing_height: float) -> tuple[float, bool]:
    """Forward progress + alive bonus - control cost; done when fallen.

    `action` is the normalized command in [-1, 1]^3.
    """
    forward_velocity = (next_state.q[0] - prev.q[0]) / dt
    reward = forward_velocity + ALIVE_BONUS - CONTROL_COST * float(action @ action)
    z, pitch = next_state.q[1], next_state.q[2]
    done = bool(z < MIN_HEIGHT_FRACTION * standing_height
                or abs(pitch) > MAX_PITCH)
    return reward, done


def sample_wall(rng: np.random.Generator) -> float:
    """Wall x-position ahead of the start, uniform on [1.8, 3.8] meters."""
    return float(rng.uniform(*WALL_X_RANGE))


def _ray_box(ox: float, oz: float, dx: float, dz: float,
             x0: float, x1: float, z0: float, z1: float,
             max_range: float) -> float | None:
    """Entry distance of a ray into an axis-aligned box, None if no hit."""
    tmin, tmax = 0.0, max_range
    for o, d, lo, hi in ((ox, dx, x0, x1), (oz, dz, z0, z1)):
        if abs(d) < 1.0e-300:
            if o < lo or o > hi:
                return None
        else:
            t1, t2 = (lo - o) / d, (hi - o) / d
            if t1 > t2:
                t1, t2 = t2, t1
            tmin = max(tmin, t1)
            tmax = min(tmax, t2)
            if tmin > tmax:
                return None
    return tmin


def torso_sense(model: RunnerModel, state: RunnerState,
                wall_x: float | None,
                sensor: SensorParams | None = None) -> np.ndarray:
    """Torso-mounted range readouts against the wall, normalized to [0, 1].

    Beams fan from straight down to the torso's forward horizontal (they
    rotate with pitch). Readout is distance/max_range on a hit within range,
    0.0 otherwise — so the vector is all zero whenever no wall exists.
    """
    s = sensor or (model.variation.sensor or SensorParams())
    out = np.zeros(s.n_beams)
    if wall_x is None:
        return out
    wall = model.variation.wall or WallParams()
    ox, oz, pitch = state.q[0], state.q[1], state.q[2]
    angles = pitch + np.linspace(-s.arc, 0.0, s.n_beams)
    for i, a in enumerate(angles):
        d = _ray_box(ox, oz, math.cos(a), math.sin(a),
                     wall_x, wall_x + wall.thickness, 0.0, wall.height,
                     s.max_range)
        if d is not None:
            out[i] = d / s.max_range
    return out


class RunnerEnv(Env):
    """Torque-controlled planar hopper, optionally with wall and torso sensor."""

    RESET_NOISE = 5.0e-3

    def __init__(self, variation: VariationParams, horizon: int = 1000,
                 seed: int = 0):
        self.model = build_runner(variation)
        self.chain = self.model.to_chain()
        self.variation = variation
        self.sensor_enabled = variation.sensor is not None
        self.wall_enabled = variation.wall is not None and variation.wall.enabled
        obs_dim = 11 + (variation.sensor.n_beams if self.sensor_enabled else 0)
        action_space = BoxSpace.symmetric(1.0, 3)
        obs_low = np.full(obs_dim, -np.inf)
        obs_high = np.full(obs_dim, np.inf)
        if self.sensor_enabled:
            obs_low[11:] = 0.0
            obs_high[11:] = 1.0
        super().__init__(action_space, BoxSpace(obs_low, obs_high), horizon, seed)
        self.state: RunnerState | None = None
        self.wall_x: float | None = None

    def _reset_impl(self, rng: np.random.Generator) -> np.ndarray:
        q = np.zeros(6)
        q[1] = self.model.standing_height
        q += rng.uniform(-self.RESET_NOISE, self.RESET_NOISE, 6)
        qd = rng.uniform(-self.RESET_NOISE, self.RESET_NOISE, 6)
        self.state = RunnerState(q, qd)
        self.wall_x = sample_wall(rng) if self.wall_enabled else None
        return self._observe()

    def _step_impl(self, action: np.ndarray):
        prev = RunnerState(self.state.q.copy(), self.state.qd.copy(),
                           self.state.t)
        tau = np.zeros(6)
        tau[3:] = action * self.model.torque_limits
        wall_arr = None
        if self.wall_x is not None:
            w = self.variation.wall
            wall_arr = np.array([1.0, self.wall_x, self.wall_x + w.thickness,
                                 w.height])
        step_info = self.chain.step(self.state.q, self.state.qd, tau,
                                    SUBSTEPS, INTERNAL_DT, wall_arr)
        self.state.t += CONTROL_DT
        if step_info["exploded"]:
            # keep downstream consumers free of NaN/inf on the abort path
            np.nan_to_num(self.state.q, copy=False, posinf=1.0e6, neginf=-1.0e6)
            np.nan_to_num(self.state.qd, copy=False, posinf=1.0e6, neginf=-1.0e6)
        reward, fallen = runner_reward(prev, self.state, action, CONTROL_DT,
                                       self.model.standing_height)
        done = fallen or step_info["exploded"]
        info = {
            "forward_velocity": float((self.state.q[0] - prev.q[0]) / CONTROL_DT),
            "contact": float(step_info["contact"]),
            "max_penetration": step_info["max_penetration"],
        }
        if step_info["exploded"]:
            info["explosion"] = 1.0
        return self._observe(), reward, done, info

    def _observe(self) -> np.ndarray:
        q, qd = self.state.q, self.state.qd
        obs = np.concatenate([q[1:], qd])   # everything but absolute x
        if self.sensor_enabled:
            obs = np.concatenate([
                obs, torso_sense(self.model, self.state, self.wall_x)])
        return obs

    def state_vector(self) -> np.ndarray:
        wall = -1.0 if self.wall_x is None else self.wall_x
        return np.concatenate([self.state.q, self.state.qd,
                               [self.state.t, wall]])
