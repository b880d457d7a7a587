"""Underactuated double pendulum (acrobot), torque on the middle joint.

Angles measure from the hanging rest pose; theta1 = theta2 = 0 with zero
rates is an exact fixed point of the passive system. States are kept
unwrapped (no modular reduction).
"""

from dataclasses import dataclass

import numpy as np

from procdyn.dynamics import _ops as ops


@dataclass(frozen=True)
class AcrobotParams:
    m1: float = 1.0
    m2: float = 1.0
    l1: float = 1.0
    l2: float = 1.0
    c1: float = 0.5  # centers of mass along each link
    c2: float = 0.5
    I1: float = 1.0
    I2: float = 1.0
    G: float = 9.8
    dt: float = 1.0 / 40.0
    substeps: int = 4
    torque_bound: float = 4.0

    def __post_init__(self):
        for name in ("m1", "m2", "l1", "l2", "c1", "c2", "I1", "I2", "G"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.dt <= 0 or self.substeps < 1:
            raise ValueError("dt must be positive and substeps >= 1")

    @property
    def frame_dt(self) -> float:
        return self.dt * self.substeps


@dataclass
class AcrobotState:
    theta1: float
    theta2: float
    dtheta1: float
    dtheta2: float

    def __post_init__(self):
        vals = (self.theta1, self.theta2, self.dtheta1, self.dtheta2)
        if not all(np.isfinite(v) for v in vals):
            raise ValueError(f"non-finite acrobot state {vals}")

    def to_vector(self) -> np.ndarray:
        return np.array(
            [self.theta1, self.theta2, self.dtheta1, self.dtheta2], dtype=np.float64
        )

    @classmethod
    def from_vector(cls, vec: np.ndarray) -> "AcrobotState":
        t1, t2, dt1, dt2 = (float(x) for x in np.asarray(vec, dtype=np.float64))
        return cls(t1, t2, dt1, dt2)


def angular_accel(th1, th2, dth1, dth2, torque, p: AcrobotParams):
    """(theta1_dd, theta2_dd) for state components of shape (...,).

    Torque enters additively in the theta2_dd numerator next to the
    (delta2/delta1)*phi1 term, the standard actuated placement; torque = 0
    reproduces the passive equations term for term. The gravity terms
    cos(x - pi/2) are evaluated as sin(x); the identity is exact and keeps
    the hanging pose an exact floating-point fixed point.
    """
    cos2 = ops.cos(th2)
    delta1 = (
        p.m1 * p.c1 * p.c1
        + p.m2 * (p.l1 * p.l1 + p.c2 * p.c2 + 2.0 * p.l1 * p.c2 * cos2)
        + p.I1
        + p.I2
    )
    delta2 = p.m2 * (p.c2 * p.c2 + p.l1 * p.c2 * cos2) + p.I2
    phi2 = p.m2 * p.c2 * p.G * ops.sin(th1 + th2)
    sin2 = ops.sin(th2)
    phi1 = (
        -p.m2 * p.l1 * p.c2 * dth2 * dth2 * sin2
        - 2.0 * p.m2 * p.l1 * p.c2 * dth2 * dth1 * sin2
        + (p.m1 * p.c1 + p.m2 * p.l1) * p.G * ops.sin(th1)
        + phi2
    )
    th2_dd = (
        torque + (delta2 / delta1) * phi1 - p.m2 * p.l1 * p.c2 * dth1 * dth1 * sin2 - phi2
    ) / (p.m2 * p.c2 * p.c2 + p.I2 - delta2 * delta2 / delta1)
    th1_dd = -(delta2 * th2_dd + phi1) / delta1
    return th1_dd, th2_dd


def step_components(th1, th2, dth1, dth2, torque, params: AcrobotParams):
    """`substeps` semi-implicit Euler steps; zero-order hold on the torque.

    Components have shape (...,); numpy arrays or engine tensors.
    """
    for _ in range(params.substeps):
        th1_dd, th2_dd = angular_accel(th1, th2, dth1, dth2, torque, params)
        dth1 = dth1 + params.dt * th1_dd
        dth2 = dth2 + params.dt * th2_dd
        th1 = th1 + params.dt * dth1
        th2 = th2 + params.dt * dth2
    return th1, th2, dth1, dth2


def step_vector(state, torque, params: AcrobotParams):
    """Batched frame step on (..., 4) state arrays [th1, th2, dth1, dth2]."""
    th1 = ops.take_last(state, 0)
    th2 = ops.take_last(state, 1)
    dth1 = ops.take_last(state, 2)
    dth2 = ops.take_last(state, 3)
    th1, th2, dth1, dth2 = step_components(th1, th2, dth1, dth2, torque, params)
    return ops.stack_last([th1, th2, dth1, dth2])


def acrobot_step(
    state: AcrobotState, torque: float, params: AcrobotParams
) -> AcrobotState:
    """Advance one video frame under a constant joint torque."""
    if not np.isfinite(torque):
        raise ValueError(f"non-finite torque {torque}")
    if abs(torque) > params.torque_bound:
        raise ValueError(
            f"|torque| = {abs(torque):.3f} exceeds bound {params.torque_bound:.3f}"
        )
    th1, th2, dth1, dth2 = step_components(
        np.float64(state.theta1),
        np.float64(state.theta2),
        np.float64(state.dtheta1),
        np.float64(state.dtheta2),
        float(torque),
        params,
    )
    return AcrobotState(float(th1), float(th2), float(dth1), float(dth2))
