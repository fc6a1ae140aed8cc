"""Planar 2-link arm tasks with randomized object start / goal positions."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from mtcontrol.locomotion.chain import REVOLUTE, PlanarChain
from mtcontrol.spaces import BoxSpace
from mtcontrol.stepping import Env

ARM_VARIANTS = ("fixed", "striker_moving_start", "pusher_moving_goal")

LINK_LENGTHS = (0.5, 0.5)
LINK_MASSES = (1.0, 1.0)
LINK_WIDTH = 0.04
TORQUE_LIMITS = np.array([8.0, 8.0])

EE_RADIUS = 0.05
OBJECT_RADIUS = 0.05

# Canonical geometry per task flavor; the randomization boxes are centered on
# the canonical points they replace.
ARM_TASKS = {
    "striker": {
        "object": (0.4, 0.15),
        "goal": (0.7, -0.25),
        "object_box": ((0.3, 0.0), (0.5, 0.3)),
    },
    "pusher": {
        "object": (0.45, 0.0),
        "goal": (0.65, 0.0),
        "goal_box": ((0.5, -0.25), (0.8, 0.25)),
    },
}

WORKSPACE_RADIUS = LINK_LENGTHS[0] + LINK_LENGTHS[1]

CONTROL_DT = 1.0e-2
SUBSTEPS = 10
INTERNAL_DT = CONTROL_DT / SUBSTEPS

EE_COST = 0.5
CONTROL_COST = 0.1


@dataclass
class ArmTask:
    """One episode's task: object start, goal, and which of them was drawn."""

    variant: str
    object_position: np.ndarray
    goal_position: np.ndarray
    link_lengths: tuple[float, float] = LINK_LENGTHS

    def __post_init__(self):
        if self.variant not in ARM_VARIANTS:
            raise ValueError(f"unknown arm variant {self.variant!r}")
        for p in (self.object_position, self.goal_position):
            if math.hypot(p[0], p[1]) > WORKSPACE_RADIUS:
                raise ValueError(f"point {tuple(p)} outside the workspace")


def build_arm_task(variant: str, rng: np.random.Generator,
                   task: str = "pusher") -> ArmTask:
    """Draw a task instance: the varied position is uniform over its box."""
    if variant == "striker_moving_start":
        task = "striker"
    elif variant == "pusher_moving_goal":
        task = "pusher"
    elif variant != "fixed":
        raise ValueError(f"unknown arm variant {variant!r}")
    geom = ARM_TASKS[task]
    obj = np.array(geom["object"])
    goal = np.array(geom["goal"])
    if variant == "striker_moving_start":
        lo, hi = geom["object_box"]
        obj = rng.uniform(lo, hi)
    elif variant == "pusher_moving_goal":
        lo, hi = geom["goal_box"]
        goal = rng.uniform(lo, hi)
    return ArmTask(variant, obj, goal)


def arm_reward(object_pos: np.ndarray, goal_pos: np.ndarray,
               ee_pos: np.ndarray, action: np.ndarray) -> float:
    """Distance-shaped reward; exactly zero when everything coincides at rest."""
    return (-float(np.hypot(*(object_pos - goal_pos)))
            - EE_COST * float(np.hypot(*(ee_pos - object_pos)))
            - CONTROL_COST * float(action @ action))


def _arm_chain() -> PlanarChain:
    l1, l2 = LINK_LENGTHS
    m1, m2 = LINK_MASSES
    jtype = np.array([REVOLUTE, REVOLUTE])
    anchor = np.array([[0.0, 0.0], [l1, 0.0]])
    mass = np.array([m1, m2])
    com = np.array([[l1 / 2.0, 0.0], [l2 / 2.0, 0.0]])
    inertia = np.array([
        m1 * (l1**2 + LINK_WIDTH**2) / 12.0,
        m2 * (l2**2 + LINK_WIDTH**2) / 12.0,
    ])
    # tabletop plane: no gravity, no ground contact
    return PlanarChain(jtype, anchor, mass, com, inertia, gravity=0.0)


class ArmEnv(Env):
    """Torque-controlled 2-link arm pushing a disc object to a goal."""

    START_POSE = np.array([0.6, 0.8])
    RESET_NOISE = 5.0e-2

    def __init__(self, variant: str, task: str = "pusher", horizon: int = 200,
                 seed: int = 0):
        if variant not in ARM_VARIANTS:
            raise ValueError(f"unknown arm variant {variant!r}")
        if task not in ARM_TASKS:
            raise ValueError(f"unknown arm task {task!r}")
        self.variant = variant
        self.task_name = task
        self.chain = _arm_chain()
        super().__init__(BoxSpace.symmetric(1.0, 2),
                         BoxSpace.unbounded(10), horizon, seed)
        self.task: ArmTask | None = None
        self.q = np.zeros(2)
        self.qd = np.zeros(2)

    def _reset_impl(self, rng: np.random.Generator) -> np.ndarray:
        self.task = build_arm_task(self.variant, rng, self.task_name)
        self.q = self.START_POSE + rng.uniform(-self.RESET_NOISE,
                                               self.RESET_NOISE, 2)
        self.qd = np.zeros(2)
        return self._observe()

    def _ee(self) -> np.ndarray:
        pos, _ = self.chain.point_state(self.q, self.qd, 1,
                                        (LINK_LENGTHS[1], 0.0))
        return pos

    def _push_object(self, ee: np.ndarray) -> None:
        # quasi-static: the object has no momentum, it just yields to the
        # end-effector until the discs separate
        delta = self.task.object_position - ee
        dist = float(np.hypot(*delta))
        min_dist = EE_RADIUS + OBJECT_RADIUS
        if dist >= min_dist:
            return
        if dist < 1.0e-12:
            direction = np.array([1.0, 0.0])
        else:
            direction = delta / dist
        self.task.object_position = ee + direction * min_dist

    def _step_impl(self, action: np.ndarray):
        tau = action * TORQUE_LIMITS
        for _ in range(SUBSTEPS):
            self.chain.step(self.q, self.qd, tau, 1, INTERNAL_DT)
            self._push_object(self._ee())
        ee = self._ee()
        reward = arm_reward(self.task.object_position,
                            self.task.goal_position, ee, action)
        obs = self._observe()
        return obs, reward, False, {
            "object_goal_distance": float(np.hypot(
                *(self.task.object_position - self.task.goal_position))),
        }

    def _observe(self) -> np.ndarray:
        ee = self._ee()
        return np.concatenate([self.q, self.qd, ee,
                               self.task.object_position,
                               self.task.goal_position])

    def state_vector(self) -> np.ndarray:
        return np.concatenate([self.q, self.qd, self.task.object_position,
                               self.task.goal_position])
