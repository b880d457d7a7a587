"""Conserved-quantity readouts used by invariant tests and the MPC cost."""

import numpy as np

from procdyn.dynamics.acrobot import AcrobotParams
from procdyn.dynamics.orbits import OrbitsParams, check_separation


def orbits_energies(positions, velocities, params: OrbitsParams):
    """(kinetic, potential, momentum) for (N, 3) position/velocity arrays."""
    p = np.asarray(positions, dtype=np.float64)
    v = np.asarray(velocities, dtype=np.float64)
    check_separation(p, params.epsilon_dist)
    ke = 0.5 * params.mass * float(np.sum(v * v))
    n = p.shape[0]
    pe = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            r = float(np.linalg.norm(p[i] - p[j]))
            pe -= params.g * params.mass * params.mass / r
    momentum = params.mass * v.sum(axis=0)
    return ke, pe, momentum


def acrobot_energies(state_vec, params: AcrobotParams):
    """(kinetic, potential, angular momentum about the pivot) for (..., 4)."""
    s = np.asarray(state_vec, dtype=np.float64)
    th1, th2, dth1, dth2 = s[..., 0], s[..., 1], s[..., 2], s[..., 3]
    p = params
    cos2 = np.cos(th2)
    delta1 = (
        p.m1 * p.c1 * p.c1
        + p.m2 * (p.l1 * p.l1 + p.c2 * p.c2 + 2.0 * p.l1 * p.c2 * cos2)
        + p.I1
        + p.I2
    )
    delta2 = p.m2 * (p.c2 * p.c2 + p.l1 * p.c2 * cos2) + p.I2
    ke = 0.5 * (
        delta1 * dth1 * dth1
        + 2.0 * delta2 * dth1 * dth2
        + (p.m2 * p.c2 * p.c2 + p.I2) * dth2 * dth2
    )
    pe = -(p.m1 * p.c1 + p.m2 * p.l1) * p.G * np.cos(th1) - p.m2 * p.c2 * p.G * np.cos(
        th1 + th2
    )
    ang_mom = delta1 * dth1 + delta2 * dth2
    return ke, pe, ang_mom


def acrobot_pe_range(params: AcrobotParams):
    """(PE at rest hang, PE upright) -- the global extremes."""
    lo = -(params.m1 * params.c1 + params.m2 * params.l1) * params.G - (
        params.m2 * params.c2 * params.G
    )
    return lo, -lo


def conserved_diagnostics(state, params, scenario: str) -> dict:
    """{kinetic, potential, momentum} for any scenario's state object."""
    if scenario == "orbits":
        ke, pe, mom = orbits_energies(state.positions, state.velocities, params)
    elif scenario == "acrobot":
        ke, pe, mom = acrobot_energies(state.to_vector(), params)
    elif scenario == "pendulum_camera":
        ke, pe, mom = acrobot_energies(state.acrobot.to_vector(), params)
    else:
        raise ValueError(f"unknown scenario {scenario!r}")
    return {"kinetic": ke, "potential": pe, "momentum": mom}
