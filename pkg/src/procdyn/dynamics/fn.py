"""Exchangeable dynamics function: one frame of symbolic state forward.

A DynamicsFn bundles a scenario, its parameter set and an optional variant
tag. It steps flat state vectors (batched over leading dims) so the same
object drives dataset generation, the predictor's procedural layer, the
variant harness and the planner. Variants G/H consume per-sample waypoint
paths / per-frame position streams and are not differentiable.
"""

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from procdyn import ProcdynError
from procdyn.dynamics import _ops as ops
from procdyn.dynamics import acrobot as acro
from procdyn.dynamics import camera as cam
from procdyn.dynamics import orbits as orb

SCENARIOS = ("orbits", "acrobot", "pendulum_camera")
VARIANT_TAGS = ("A", "B", "C", "D", "E", "F", "G", "H")

# Orbits scene region; waypoints and per-frame positions are drawn from it.
POSITION_CUBE = 3.0
# Look-at point of the fixed orbits camera; variant D pulls objects here.
CAMERA_FOCAL_POINT = (0.0, 0.0, 0.0)
# Frames a variant-G waypoint path spans before clamping at its end.
WAYPOINT_PATH_FRAMES = 30


class NonDifferentiableVariantError(ProcdynError):
    """Gradient requested through a variant that has no state gradient."""


class UnknownVariantError(ProcdynError):
    pass


@dataclass(frozen=True)
class DynamicsFn:
    scenario: str
    params: object
    num_objects: int = 3
    variant: Optional[str] = None
    sample_seed: Optional[int] = None
    waypoints: Optional[np.ndarray] = None  # (num_objects, 6, 3) for variant G

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ValueError(f"unknown scenario {self.scenario!r}")
        if self.variant is not None and self.variant not in VARIANT_TAGS:
            raise UnknownVariantError(f"unknown variant tag {self.variant!r}")
        if self.variant is not None and self.scenario != "orbits":
            raise ValueError("variants are defined for the orbits scenario only")

    @property
    def state_dim(self) -> int:
        if self.scenario == "orbits":
            return 6 * self.num_objects
        return 4 if self.scenario == "acrobot" else 7

    @property
    def per_object_dim(self) -> int:
        if self.scenario != "orbits":
            raise ValueError("per-object layout exists only for orbits")
        return 6

    @property
    def frame_dt(self) -> float:
        return self.params.frame_dt

    @property
    def differentiable(self) -> bool:
        return self.variant not in ("G", "H")

    @property
    def actuated(self) -> bool:
        return self.scenario == "acrobot"

    def for_sample(self, sample_seed: int) -> "DynamicsFn":
        """Bind per-sample variant payloads (G waypoints, H position stream)."""
        if self.variant == "G":
            rng = np.random.default_rng(sample_seed)
            pts = rng.uniform(
                -POSITION_CUBE, POSITION_CUBE, size=(self.num_objects, 6, 3)
            )
            return replace(self, sample_seed=sample_seed, waypoints=pts)
        if self.variant == "H":
            return replace(self, sample_seed=sample_seed)
        return self

    def step(self, state, frame_index: int = 0, torque=None, g=None, mass=None):
        """State for frame `frame_index` given the state of the previous frame.

        `state` is (..., state_dim), numpy or engine tensor. `torque` is a
        scalar (or (...,) array) joint torque, acrobot only. g/mass override
        the orbits constants (e.g. with learnable tensors); only the default
        orbits function accepts them.
        """
        if not self.differentiable and ops.is_tensor(state):
            raise NonDifferentiableVariantError(
                f"variant {self.variant} has no gradient w.r.t. state"
            )
        if torque is not None and self.scenario != "acrobot":
            raise ValueError(f"torque is not applicable to {self.scenario}")
        if (g is not None or mass is not None) and (
            self.scenario != "orbits" or self.variant is not None
        ):
            raise ValueError("constant overrides apply to the default orbits function")
        if self.scenario == "acrobot":
            return acro.step_vector(state, 0.0 if torque is None else torque, self.params)
        if self.scenario == "pendulum_camera":
            return cam.step_vector(state, self.params)
        return self._step_orbits(state, frame_index, g=g, mass=mass)

    def _step_orbits(self, state, frame_index, g=None, mass=None):
        lead = tuple(state.shape[:-1])
        n = self.num_objects
        s = ops.reshape(state, lead + (n, 6))
        p = s[..., 0:3]
        v = s[..., 3:6]
        p2, v2 = self._step_pv(p, v, frame_index, g=g, mass=mass)
        merged = ops.concat([p2, v2], axis=-1)
        return ops.reshape(merged, lead + (6 * n,))

    def _step_pv(self, p, v, frame_index, g=None, mass=None):
        params = self.params
        tag = self.variant
        if tag is None:
            if g is not None or mass is not None:
                gv = params.g if g is None else g
                mv = params.mass if mass is None else mass
                accel = lambda q: orb.pairwise_accel(q, gv, mv)
                return orb.step_pv(p, v, params, accel_fn=accel)
            return orb.step_pv(p, v, params)
        if tag == "A":
            fast = replace(params, substeps=4)
            return orb.step_pv(p, v, fast)
        if tag == "B":
            return orb.step_pv(p, v, replace(params, g=20.0))
        if tag == "C":
            return orb.step_pv(p, v, params, force_scale=3.0)
        if tag == "D":
            accel = lambda q: orb.pairwise_accel(
                q, params.g, params.mass, flip_force=True,
                focal_pull=CAMERA_FOCAL_POINT,
            )
            return orb.step_pv(p, v, params, accel_fn=accel)
        if tag == "E":
            # Force-free: one fused position jump per frame keeps the exact
            # p0 + sum(frame_dt * v0) linearity the harness asserts.
            return p + params.frame_dt * v, v
        if tag == "F":
            return p, v * 0.0
        if tag == "G":
            if self.waypoints is None:
                raise ValueError("variant G needs for_sample() waypoints")
            p_new = waypoint_positions(self.waypoints, frame_index, params.frame_dt)
            v_new = waypoint_velocities(self.waypoints, frame_index, params.frame_dt)
            p_new = np.broadcast_to(p_new, np.shape(p)).astype(np.float64)
            v_new = np.broadcast_to(v_new, np.shape(v)).astype(np.float64)
            return p_new, v_new
        if tag == "H":
            if self.sample_seed is None:
                raise ValueError("variant H needs for_sample() seeding")
            rng = np.random.default_rng((self.sample_seed, int(frame_index)))
            p_new = rng.uniform(
                -POSITION_CUBE, POSITION_CUBE, size=(self.num_objects, 3)
            )
            p_new = np.broadcast_to(p_new, np.shape(p)).astype(np.float64)
            return p_new.copy(), np.asarray(v) * 0.0
        raise UnknownVariantError(f"unknown variant tag {tag!r}")


def _arc_param(waypoints):
    """Cumulative arc length per waypoint, (num_objects, 6)."""
    seg = np.linalg.norm(np.diff(waypoints, axis=1), axis=2)  # (K, 5)
    cum = np.concatenate([np.zeros((seg.shape[0], 1)), np.cumsum(seg, axis=1)], axis=1)
    return cum


def waypoint_positions(waypoints, frame_index, frame_dt):
    """Constant-speed piecewise-linear path position at a frame index."""
    cum = _arc_param(waypoints)
    total = cum[:, -1]
    t = min(max(frame_index, 0), WAYPOINT_PATH_FRAMES) / WAYPOINT_PATH_FRAMES
    want = t * total  # arc distance per object
    out = np.empty((waypoints.shape[0], 3))
    for k in range(waypoints.shape[0]):
        out[k] = _interp_arc(waypoints[k], cum[k], want[k])
    return out


def waypoint_velocities(waypoints, frame_index, frame_dt):
    """Finite-difference velocity consistent with waypoint_positions."""
    here = waypoint_positions(waypoints, frame_index, frame_dt)
    nxt = waypoint_positions(waypoints, frame_index + 1, frame_dt)
    return (nxt - here) / frame_dt


def _interp_arc(points, cum, s):
    j = int(np.searchsorted(cum, s, side="right") - 1)
    j = min(max(j, 0), points.shape[0] - 2)
    seg = cum[j + 1] - cum[j]
    w = 0.0 if seg == 0 else (s - cum[j]) / seg
    w = min(max(w, 0.0), 1.0)
    return points[j] * (1.0 - w) + points[j + 1] * w


def default_fn(scenario: str, num_objects: int = 3, **param_overrides) -> DynamicsFn:
    """The default dynamics function for a scenario."""
    if scenario == "orbits":
        params = orb.OrbitsParams(**param_overrides)
        return DynamicsFn("orbits", params, num_objects=num_objects)
    params = acro.AcrobotParams(**param_overrides)
    return DynamicsFn(scenario, params)


def make_variant(tag: str, base: DynamicsFn) -> DynamicsFn:
    """Swap the default orbits function for one of the validation variants."""
    if tag not in VARIANT_TAGS:
        raise UnknownVariantError(f"unknown variant tag {tag!r}")
    if base.scenario != "orbits" or base.variant is not None:
        raise ValueError("variants swap in for the default orbits function")
    return replace(base, variant=tag)
