from procdyn.engine import nn, ops
from procdyn.engine.checkpoint import (
    CheckpointError,
    load_checkpoint,
    restore_into,
    save_checkpoint,
)
from procdyn.engine.conv import conv2d, conv2d_transpose
from procdyn.engine.diff_dynamics import differentiable_step, rollout_states
from procdyn.engine.gradcheck import check_gradients, numeric_grad, relative_error
from procdyn.engine.optim import Adam, MissingGradError, clip_global_norm, global_grad_norm
from procdyn.engine.tensor import (
    DtypeError,
    Parameter,
    ShapeError,
    TapeError,
    Tensor,
    grad_enabled,
    no_grad,
)

__all__ = [
    "Adam",
    "CheckpointError",
    "DtypeError",
    "MissingGradError",
    "Parameter",
    "ShapeError",
    "TapeError",
    "Tensor",
    "check_gradients",
    "clip_global_norm",
    "conv2d",
    "conv2d_transpose",
    "differentiable_step",
    "global_grad_norm",
    "grad_enabled",
    "load_checkpoint",
    "nn",
    "no_grad",
    "numeric_grad",
    "ops",
    "relative_error",
    "restore_into",
    "rollout_states",
    "save_checkpoint",
]
