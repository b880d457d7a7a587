"""Array helpers that run on plain numpy arrays or engine tensors.

The step functions in this package are written once against these helpers;
the autodiff engine's Tensor implements the same methods, so the
differentiable forward pass executes the identical numpy calls in the
identical order and is bit-for-bit equal to the plain path.
"""

import numpy as np


def is_tensor(x):
    return getattr(x, "is_autodiff_tensor", False)


def asarray(x):
    """Raw numpy view of the value (grad-free)."""
    return x.data if is_tensor(x) else np.asarray(x)


def reshape(x, shape):
    return x.reshape(shape)


def tile(x, reps):
    return x.tile(reps) if is_tensor(x) else np.tile(x, reps)


def sqrt(x):
    return x.sqrt() if is_tensor(x) else np.sqrt(x)


def sin(x):
    return x.sin() if is_tensor(x) else np.sin(x)


def cos(x):
    return x.cos() if is_tensor(x) else np.cos(x)


def sum_along(x, axis):
    return x.sum(axis=axis) if is_tensor(x) else np.sum(x, axis=axis)


def concat(parts, axis):
    if any(is_tensor(p) for p in parts):
        from procdyn.engine import ops as tops

        return tops.concat(parts, axis=axis)
    return np.concatenate(parts, axis=axis)


def stack_last(parts):
    """Stack scalars-per-lane along a new trailing axis."""
    if any(is_tensor(p) for p in parts):
        from procdyn.engine import ops as tops

        return tops.stack(parts, axis=-1)
    return np.stack(parts, axis=-1)


def take_last(x, index):
    """x[..., index] keeping the trailing axis dropped."""
    return x[..., index]
