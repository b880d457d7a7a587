"""Dynamics functions as tape layers.

The forward pass reuses the dynamics package's step code verbatim (the
helpers there dispatch on tensor-ness), so the differentiable value equals
the plain float64 simulation bit for bit; the tape adds gradients wrt the
state and, for the default orbits function, the constants g and mass.
"""

import numpy as np

from procdyn.dynamics.fn import DynamicsFn
from procdyn.engine.tensor import Tensor


def as_tensor(x, requires_grad=False):
    if isinstance(x, Tensor):
        return x
    return Tensor(np.asarray(x, dtype=np.float64), requires_grad=requires_grad)


def differentiable_step(
    fn: DynamicsFn, state, frame_index: int = 0, torque=None, g=None, mass=None
) -> Tensor:
    """One frame of F with gradient support.

    state: Tensor (..., state_dim) float64. torque/g/mass may be Tensors to
    obtain gradients wrt the action or the environment constants. Variants
    G/H raise NonDifferentiableVariantError (via fn.step).
    """
    state = as_tensor(state)
    return fn.step(state, frame_index=frame_index, torque=torque, g=g, mass=mass)


def rollout_states(
    fn: DynamicsFn, state0, n_frames: int, g=None, mass=None, start_index: int = 0
):
    """List of n_frames successive states (Tensor chain), excluding state0."""
    out = []
    s = as_tensor(state0)
    for k in range(n_frames):
        s = differentiable_step(fn, s, frame_index=start_index + k + 1, g=g, mass=mass)
        out.append(s)
    return out
