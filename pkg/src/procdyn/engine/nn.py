"""Layers: thin Parameter containers with forward methods.

Initialization is fan-in uniform, U(-1/sqrt(fan_in), 1/sqrt(fan_in)),
drawn from an explicit numpy Generator so model construction is a pure
function of the seed.
"""

import numpy as np

from procdyn.engine import conv as convops
from procdyn.engine import ops
from procdyn.engine.tensor import Parameter


class Module:
    """Minimal container: parameters() walks attributes recursively."""

    def parameters(self):
        seen = set()
        out = []
        for value in self.__dict__.values():
            for p in _collect(value):
                if id(p) not in seen:
                    seen.add(id(p))
                    out.append(p)
        return out

    def named_parameters(self):
        return {p.name: p for p in self.parameters()}


def _collect(value):
    if isinstance(value, Parameter):
        yield value
    elif isinstance(value, Module):
        yield from value.parameters()
    elif isinstance(value, (list, tuple)):
        for v in value:
            yield from _collect(v)
    elif isinstance(value, dict):
        for v in value.values():
            yield from _collect(v)


def fan_in_uniform(rng, shape, fan_in, scale=1.0, dtype=np.float32):
    bound = scale / np.sqrt(fan_in)
    return rng.uniform(-bound, bound, size=shape).astype(dtype)


class Linear(Module):
    def __init__(self, rng, in_dim, out_dim, name, bias=True, scale=1.0,
                 lr_scale=1.0, dtype=np.float32):
        self.weight = Parameter(
            fan_in_uniform(rng, (in_dim, out_dim), in_dim, scale, dtype),
            name=f"{name}.weight", lr_scale=lr_scale, dtype=dtype,
        )
        self.bias = None
        if bias:
            self.bias = Parameter(
                np.zeros(out_dim, dtype=dtype), name=f"{name}.bias",
                lr_scale=lr_scale, dtype=dtype,
            )

    def __call__(self, x):
        return ops.linear(x, self.weight, self.bias)


class LayerNorm(Module):
    def __init__(self, dim, name, dtype=np.float32):
        self.gamma = Parameter(np.ones(dim, dtype=dtype), name=f"{name}.gamma", dtype=dtype)
        self.beta = Parameter(np.zeros(dim, dtype=dtype), name=f"{name}.beta", dtype=dtype)

    def __call__(self, x):
        return ops.layer_norm(x, self.gamma, self.beta)


class Conv2d(Module):
    def __init__(self, rng, in_ch, out_ch, kernel, name, stride=1, padding=0,
                 dtype=np.float32):
        fan_in = in_ch * kernel * kernel
        self.weight = Parameter(
            fan_in_uniform(rng, (out_ch, in_ch, kernel, kernel), fan_in, dtype=dtype),
            name=f"{name}.weight", dtype=dtype,
        )
        self.bias = Parameter(np.zeros(out_ch, dtype=dtype), name=f"{name}.bias", dtype=dtype)
        self.stride = stride
        self.padding = padding

    def __call__(self, x):
        return convops.conv2d(x, self.weight, self.bias, self.stride, self.padding)


class ConvTranspose2d(Module):
    def __init__(self, rng, in_ch, out_ch, kernel, name, stride=1, padding=0,
                 output_padding=0, dtype=np.float32):
        fan_in = in_ch * kernel * kernel
        self.weight = Parameter(
            fan_in_uniform(rng, (in_ch, out_ch, kernel, kernel), fan_in, dtype=dtype),
            name=f"{name}.weight", dtype=dtype,
        )
        self.bias = Parameter(np.zeros(out_ch, dtype=dtype), name=f"{name}.bias", dtype=dtype)
        self.stride = stride
        self.padding = padding
        self.output_padding = output_padding

    def __call__(self, x):
        return convops.conv2d_transpose(
            x, self.weight, self.bias, self.stride, self.padding, self.output_padding
        )


class GRUCell(Module):
    """Single gated update, used by the slot refiner."""

    def __init__(self, rng, dim, name, dtype=np.float32):
        self.w_ir = Linear(rng, dim, 3 * dim, f"{name}.input", dtype=dtype)
        self.w_hr = Linear(rng, dim, 3 * dim, f"{name}.hidden", dtype=dtype)
        self.dim = dim

    def __call__(self, x, h):
        gi = self.w_ir(x)
        gh = self.w_hr(h)
        i_r, i_z, i_n = ops.split(gi, 3, axis=-1)
        h_r, h_z, h_n = ops.split(gh, 3, axis=-1)
        r = ops.sigmoid(i_r + h_r)
        z = ops.sigmoid(i_z + h_z)
        n = ops.tanh(i_n + r * h_n)
        return n + z * (h - n)
