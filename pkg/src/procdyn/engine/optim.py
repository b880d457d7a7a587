"""Adam with global-norm gradient clipping and per-parameter LR scales."""

import numpy as np

from procdyn import ProcdynError
from procdyn.engine.tensor import Parameter


class MissingGradError(ProcdynError):
    pass


def global_grad_norm(params) -> float:
    total = 0.0
    for p in params:
        if p.grad is not None:
            g = p.grad.astype(np.float64, copy=False)
            total += float(np.dot(g.reshape(-1), g.reshape(-1)))
    return float(np.sqrt(total))


def clip_global_norm(params, max_norm: float) -> float:
    """Scale all grads so the global norm is at most max_norm; returns the norm."""
    norm = global_grad_norm(params)
    if max_norm > 0 and norm > max_norm:
        scale = max_norm / norm
        for p in params:
            if p.grad is not None:
                p.grad *= scale
    return norm


class Adam:
    def __init__(self, params, lr=2e-4, betas=(0.9, 0.999), eps=1e-8, clip_norm=0.05):
        self.params = list(params)
        if not all(isinstance(p, Parameter) for p in self.params):
            raise TypeError("Adam optimizes Parameter objects")
        self.lr = lr
        self.beta1, self.beta2 = betas
        self.eps = eps
        self.clip_norm = clip_norm
        self.state = {
            p.name: {
                "m": np.zeros_like(p.data, dtype=np.float64),
                "v": np.zeros_like(p.data, dtype=np.float64),
                "step": 0,
            }
            for p in self.params
        }

    def zero_grad(self):
        for p in self.params:
            p.grad = None

    def step(self):
        missing = [p.name for p in self.params if p.grad is None]
        if missing:
            raise MissingGradError(f"parameters without gradients: {missing[:5]}")
        if self.clip_norm:
            clip_global_norm(self.params, self.clip_norm)
        for p in self.params:
            st = self.state[p.name]
            st["step"] += 1
            g = p.grad.astype(np.float64, copy=False)
            st["m"] = self.beta1 * st["m"] + (1 - self.beta1) * g
            st["v"] = self.beta2 * st["v"] + (1 - self.beta2) * (g * g)
            mhat = st["m"] / (1 - self.beta1 ** st["step"])
            vhat = st["v"] / (1 - self.beta2 ** st["step"])
            update = self.lr * p.lr_scale * mhat / (np.sqrt(vhat) + self.eps)
            p.data = (p.data.astype(np.float64) - update).astype(p.data.dtype)
