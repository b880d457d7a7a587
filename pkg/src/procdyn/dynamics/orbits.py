"""Gravitational n-body system stepped with semi-implicit Euler.

Every object attracts every other with force g*m/r^2 along the separation
direction; acceleration is force over mass. Velocity updates before
position within each substep, which is what keeps long rollouts stable.
"""

from dataclasses import dataclass, field

import numpy as np

from procdyn import ProcdynError
from procdyn.dynamics import _ops as ops


class DegenerateSeparationError(ProcdynError):
    """Two objects closer than the configured guard distance."""


@dataclass(frozen=True)
class OrbitsParams:
    g: float = 7.0
    mass: float = 1.0
    dt: float = 1.0 / 40.0
    substeps: int = 10
    epsilon_dist: float = 1e-6

    def __post_init__(self):
        if self.g <= 0:
            raise ValueError(f"g must be positive, got {self.g}")
        if self.mass <= 0:
            raise ValueError(f"mass must be positive, got {self.mass}")
        if self.dt <= 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.substeps < 1:
            raise ValueError(f"substeps must be >= 1, got {self.substeps}")

    @property
    def frame_dt(self) -> float:
        return self.dt * self.substeps


@dataclass
class OrbitsState:
    positions: np.ndarray  # (N, 3) float64
    velocities: np.ndarray  # (N, 3) float64

    def __post_init__(self):
        self.positions = np.asarray(self.positions, dtype=np.float64)
        self.velocities = np.asarray(self.velocities, dtype=np.float64)
        if self.positions.ndim != 2 or self.positions.shape[1] != 3:
            raise ValueError(f"positions must be (N, 3), got {self.positions.shape}")
        if self.velocities.shape != self.positions.shape:
            raise ValueError(
                f"velocities shape {self.velocities.shape} != positions shape "
                f"{self.positions.shape}"
            )
        if self.positions.shape[0] < 1:
            raise ValueError("need at least one object")
        if not (np.isfinite(self.positions).all() and np.isfinite(self.velocities).all()):
            raise ValueError("state contains non-finite entries")

    @property
    def num_objects(self) -> int:
        return self.positions.shape[0]

    def to_vector(self) -> np.ndarray:
        """Flat per-object [px,py,pz,vx,vy,vz] layout, objects concatenated."""
        return np.concatenate([self.positions, self.velocities], axis=1).reshape(-1)

    @classmethod
    def from_vector(cls, vec: np.ndarray) -> "OrbitsState":
        per = np.asarray(vec, dtype=np.float64).reshape(-1, 6)
        return cls(positions=per[:, :3].copy(), velocities=per[:, 3:].copy())


def check_separation(positions: np.ndarray, epsilon_dist: float) -> None:
    """Raise if any pair of objects is closer than epsilon_dist."""
    p = np.asarray(positions, dtype=np.float64)
    n = p.shape[-2]
    if n < 2:
        return
    diff = p[..., None, :, :] - p[..., :, None, :]
    d2 = np.sum(diff * diff, axis=-1)
    iu = np.triu_indices(n, k=1)
    min_d2 = d2[..., iu[0], iu[1]].min()
    if min_d2 < epsilon_dist * epsilon_dist:
        raise DegenerateSeparationError(
            f"minimum pairwise separation {np.sqrt(min_d2):.3e} below guard "
            f"{epsilon_dist:.3e}"
        )


def pairwise_accel(p, g, m, flip_force: bool = False, focal_pull=None):
    """Accelerations for positions p of shape (..., N, 3).

    Works on numpy arrays and on engine tensors (shared code path). The
    force on object n is sum_i!=n unit(p_i - p_n) * g*m / r^2, divided by m
    afterwards, exactly as the integration scheme defines it.

    flip_force negates the pairwise term (repulsion); focal_pull, if given,
    is a world point every object is additionally attracted to with the
    same inverse-square law.
    """
    shape = p.shape
    n = shape[-2]
    lead = tuple(shape[:-2])
    ones = (1,) * len(lead)

    p_src = ops.tile(ops.reshape(p, lead + (1, n, 3)), ones + (n, 1, 1))
    p_tgt = ops.tile(ops.reshape(p, lead + (n, 1, 3)), ones + (1, n, 1))
    diff = p_src - p_tgt  # diff[..., n_target, i_source, :]

    d2 = ops.sum_along(diff * diff, axis=-1)
    eye = np.eye(n, dtype=np.float64).reshape(ones + (n, n))
    d2_safe = d2 + eye  # keeps the self-pair division finite; masked below
    r = ops.sqrt(d2_safe)

    coef = (g * m) / (d2_safe * r)
    coef3 = ops.tile(ops.reshape(coef, lead + (n, n, 1)), ones + (1, 1, 3))
    mask = np.broadcast_to(
        (1.0 - np.eye(n, dtype=np.float64))[:, :, None], (n, n, 3)
    ).reshape(ones + (n, n, 3))

    force = ops.sum_along(diff * coef3 * mask, axis=-2)
    if flip_force:
        force = -force
    if focal_pull is not None:
        focal = np.broadcast_to(
            np.asarray(focal_pull, dtype=np.float64).reshape(3), (n, 3)
        ).reshape(ones + (n, 3))
        to_focal = (-p) + focal
        fd2 = ops.sum_along(to_focal * to_focal, axis=-1)
        fr = ops.sqrt(fd2)
        fcoef = (g * m) / (fd2 * fr)
        fcoef3 = ops.tile(ops.reshape(fcoef, lead + (n, 1)), ones + (1, 3))
        force = force + to_focal * fcoef3
    return force / m


def step_pv(p, v, params: OrbitsParams, accel_fn=None, force_scale: float = 1.0):
    """One video frame: `substeps` semi-implicit Euler steps of size dt.

    p, v have shape (..., N, 3); numpy arrays or engine tensors. accel_fn
    overrides the default pairwise gravity (used by variants).
    """
    if accel_fn is None:
        accel_fn = lambda q: pairwise_accel(q, params.g, params.mass)
    for _ in range(params.substeps):
        check_separation(ops.asarray(p), params.epsilon_dist)
        a = accel_fn(p)
        if force_scale != 1.0:
            a = a * force_scale
        v = v + params.dt * a
        p = p + params.dt * v
    return p, v


def orbits_accel(state: OrbitsState, params: OrbitsParams) -> np.ndarray:
    """Accelerations (N, 3) for the current state."""
    check_separation(state.positions, params.epsilon_dist)
    return pairwise_accel(state.positions, params.g, params.mass)


def orbits_step(state: OrbitsState, params: OrbitsParams) -> OrbitsState:
    """Advance one video frame (velocity first, then position, per substep)."""
    p, v = step_pv(state.positions, state.velocities, params)
    return OrbitsState(positions=p, velocities=v)
