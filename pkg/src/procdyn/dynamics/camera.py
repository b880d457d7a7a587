"""Pendulum-mounted camera: acrobot dynamics plus the rigid camera mount.

The camera hangs off the double pendulum and always sits at height 10,
looking at the textured ground plane; only its (x, y) follows the links.
"""

from dataclasses import dataclass

import numpy as np

from procdyn.dynamics import _ops as ops
from procdyn.dynamics.acrobot import AcrobotParams, AcrobotState, step_components

CAMERA_HEIGHT = 10.0


@dataclass
class PendulumCameraState:
    acrobot: AcrobotState
    camera_pos: np.ndarray  # (3,)

    def __post_init__(self):
        self.camera_pos = np.asarray(self.camera_pos, dtype=np.float64).reshape(3)
        if self.camera_pos[2] != CAMERA_HEIGHT:
            raise ValueError(
                f"camera height must be {CAMERA_HEIGHT}, got {self.camera_pos[2]}"
            )

    def to_vector(self) -> np.ndarray:
        return np.concatenate([self.acrobot.to_vector(), self.camera_pos])

    @classmethod
    def from_vector(cls, vec: np.ndarray) -> "PendulumCameraState":
        vec = np.asarray(vec, dtype=np.float64).reshape(7)
        return cls(AcrobotState.from_vector(vec[:4]), vec[4:].copy())

    @classmethod
    def from_angles(cls, acrobot: AcrobotState, params: AcrobotParams) -> "PendulumCameraState":
        pos = camera_position(acrobot.theta1, acrobot.theta2, params)
        return cls(acrobot, np.asarray(pos))


def camera_position(th1, th2, params: AcrobotParams):
    """Camera (x, y, z) for link angles; components of shape (...,)."""
    x = -2.0 * params.l1 * ops.sin(th1) - params.l2 * ops.sin(th1 + th2)
    y = 2.0 * params.l1 * ops.cos(th1) + params.l2 * ops.cos(th1 + th2)
    z = x * 0.0 + CAMERA_HEIGHT
    return ops.stack_last([x, y, z])


def step_vector(state, params: AcrobotParams):
    """Batched frame step on (..., 7) arrays [th1, th2, dth1, dth2, px, py, pz]."""
    th1 = ops.take_last(state, 0)
    th2 = ops.take_last(state, 1)
    dth1 = ops.take_last(state, 2)
    dth2 = ops.take_last(state, 3)
    th1, th2, dth1, dth2 = step_components(th1, th2, dth1, dth2, 0.0, params)
    angles = ops.stack_last([th1, th2, dth1, dth2])
    pos = camera_position(th1, th2, params)
    return ops.concat([angles, pos], axis=-1)


def pendulum_camera_step(
    state: PendulumCameraState, params: AcrobotParams
) -> PendulumCameraState:
    """Advance the passive pendulum one frame, then recompute the mount."""
    vec = step_vector(state.to_vector(), params)
    return PendulumCameraState.from_vector(np.asarray(vec))
