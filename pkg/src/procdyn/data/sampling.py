"""Initial conditions and per-sample scene appearance, all seed-derived.

Everything a sample needs (state, colors, radii, light schedule) comes out
of deterministic functions of (seed, config), which is what makes samples
regenerable and the store self-checking.
"""

import numpy as np

from procdyn import ProcdynError
from procdyn.dynamics import (
    AcrobotParams,
    AcrobotState,
    OrbitsState,
    PendulumCameraState,
)
from procdyn.render import AcrobotScene, OrbitsScene

POSITION_CUBE = 3.0
MIN_SEPARATION = 0.5
MAX_SPEED = 1.0
REJECTION_TRIES = 1000

# Dynamic-light schedule bounds (radians/second), used when a dataset is
# generated with rotating illumination.
LIGHT_RATE_RANGE = (0.6, 1.8)


class SamplingError(ProcdynError):
    pass


def _state_rng(seed):
    return np.random.default_rng((int(seed), 0xA11CE))


def _scene_rng(seed):
    return np.random.default_rng((int(seed), 0x5CE11E))


def sample_initial_conditions(scenario: str, rng_seed: int, num_objects: int = 3,
                              params: AcrobotParams | None = None):
    """Seed-deterministic initial state for a scenario."""
    rng = _state_rng(rng_seed)
    if scenario == "orbits":
        for _ in range(REJECTION_TRIES):
            p = rng.uniform(-POSITION_CUBE, POSITION_CUBE, size=(num_objects, 3))
            if num_objects < 2:
                break
            d = np.linalg.norm(p[:, None] - p[None, :], axis=-1)
            if d[np.triu_indices(num_objects, 1)].min() >= MIN_SEPARATION:
                break
        else:
            raise SamplingError(
                f"no admissible configuration in {REJECTION_TRIES} tries"
            )
        # uniform in the speed ball: direction times cbrt-distributed radius
        direction = rng.normal(size=(num_objects, 3))
        direction /= np.linalg.norm(direction, axis=1, keepdims=True)
        radius = MAX_SPEED * rng.uniform(0.0, 1.0, size=(num_objects, 1)) ** (1.0 / 3.0)
        return OrbitsState(p, direction * radius)
    if scenario == "acrobot":
        angles = rng.uniform(-np.pi, np.pi, size=2)
        rates = rng.uniform(-1.0, 1.0, size=2)
        return AcrobotState(angles[0], angles[1], rates[0], rates[1])
    if scenario == "pendulum_camera":
        angles = rng.uniform(-np.pi, np.pi, size=2)
        rates = rng.uniform(-1.0, 1.0, size=2)
        return PendulumCameraState.from_angles(
            AcrobotState(angles[0], angles[1], rates[0], rates[1]),
            params or AcrobotParams(),
        )
    raise ValueError(f"unknown scenario {scenario!r}")


def _hsv_to_rgb(h, s, v):
    i = int(h * 6.0) % 6
    f = h * 6.0 - int(h * 6.0)
    p, q, t = v * (1 - s), v * (1 - f * s), v * (1 - (1 - f) * s)
    return [
        (v, t, p), (q, v, p), (p, v, t), (p, q, v), (t, p, v), (v, p, q)
    ][i]


def scene_for_sample(scenario: str, rng_seed: int, num_objects: int = 3):
    """Per-sample appearance; orbits vary per seed, acrobot stays fixed."""
    if scenario == "orbits":
        rng = _scene_rng(rng_seed)
        hues = (rng.uniform(0, 1) + np.arange(num_objects) / num_objects) % 1.0
        colors = tuple(_hsv_to_rgb(h, 0.72, 0.92) for h in hues)
        radii = tuple(rng.uniform(0.32, 0.5, size=num_objects).tolist())
        return OrbitsScene(colors=colors, radii=radii)
    return AcrobotScene()


def light_schedule(rng_seed: int):
    """(phase, rate) for the rotating-light option."""
    rng = np.random.default_rng((int(rng_seed), 0x11F17))
    phase = rng.uniform(0.0, 2 * np.pi)
    rate = rng.uniform(*LIGHT_RATE_RANGE)
    return phase, rate
