"""conv2d and transposed conv2d, NCHW layout, im2col + BLAS matmul.

Three core kernels (forward, grad-input, grad-weight) are shared: conv2d
uses them directly, conv2d_transpose is the grad-input kernel run forward
with the other two providing its gradients. Patch matrices are rebuilt in
backward rather than cached; inputs stay alive on the tape anyway and the
patch buffers dominate memory otherwise.
"""

import numpy as np

from procdyn.engine.ops import _out
from procdyn.engine.tensor import ShapeError


def _im2col(x, kh, kw, stride, pad):
    """(B, C, H, W) -> (B, h_out*w_out, C*kh*kw) patches, plus (h_out, w_out)."""
    b, c, h, w = x.shape
    h_out = (h + 2 * pad - kh) // stride + 1
    w_out = (w + 2 * pad - kw) // stride + 1
    xp = np.pad(x, ((0, 0), (0, 0), (pad, pad), (pad, pad))) if pad else x
    sb, sc, sh, sw = xp.strides
    windows = np.lib.stride_tricks.as_strided(
        xp,
        shape=(b, c, h_out, w_out, kh, kw),
        strides=(sb, sc, sh * stride, sw * stride, sh, sw),
        writeable=False,
    )
    col = np.ascontiguousarray(windows.transpose(0, 2, 3, 1, 4, 5)).reshape(
        b, h_out * w_out, c * kh * kw
    )
    return col, (h_out, w_out)


def _gather_conv(x, w_mat, kh, kw, stride, pad, out_channels):
    """Plain correlation: patches of x times w_mat (C_out, C_in*kh*kw)."""
    col, (h_out, w_out) = _im2col(x, kh, kw, stride, pad)
    y = col @ w_mat.T  # (B, HW, C_out)
    return np.ascontiguousarray(y.transpose(0, 2, 1)).reshape(
        x.shape[0], out_channels, h_out, w_out
    )


def _scatter_conv(src, w_mat, kh, kw, stride, pad, out_hw, out_channels):
    """Adjoint of _gather_conv: spread src through the kernel onto a larger grid.

    src: (B, C_src, h, w); w_mat: (C_src, C_out*kh*kw). Returns
    (B, C_out, out_hw[0], out_hw[1]).
    """
    b, c_src, h, w = src.shape
    gcol = src.reshape(b, c_src, -1).transpose(0, 2, 1) @ w_mat  # (B, hw, Co*kh*kw)
    gcol = gcol.reshape(b, h, w, out_channels, kh, kw)
    hp, wp = out_hw[0] + 2 * pad, out_hw[1] + 2 * pad
    buf = np.zeros((b, out_channels, hp, wp), dtype=src.dtype)
    for i in range(kh):
        for j in range(kw):
            buf[:, :, i : i + stride * h : stride, j : j + stride * w : stride] += (
                gcol[:, :, :, :, i, j].transpose(0, 3, 1, 2)
            )
    if pad:
        buf = buf[:, :, pad:-pad, pad:-pad]
    return np.ascontiguousarray(buf)


def _patch_outer(x, gy, kh, kw, stride, pad, w_rows):
    """Grad wrt a weight matrix (w_rows, C_x*kh*kw) of a gather conv."""
    col, _ = _im2col(x, kh, kw, stride, pad)
    g2 = gy.reshape(gy.shape[0], w_rows, -1)  # (B, rows, HW)
    return np.einsum("bro,boi->ri", g2, col, optimize=True)


def conv2d(x, weight, bias=None, stride=1, padding=0):
    """NCHW convolution; weight (C_out, C_in, kh, kw), bias (C_out,)."""
    if x.ndim != 4 or weight.ndim != 4:
        raise ShapeError(f"conv2d wants 4-d tensors, got {x.shape} and {weight.shape}")
    co, ci, kh, kw = weight.shape
    if ci != x.shape[1]:
        raise ShapeError(f"conv2d channels: input {x.shape[1]} vs weight {ci}")
    y = _gather_conv(x.data, weight.data.reshape(co, -1), kh, kw, stride, padding, co)
    parents = [x, weight]
    if bias is not None:
        if bias.shape != (co,):
            raise ShapeError(f"conv2d bias shape {bias.shape} != ({co},)")
        y = y + bias.data.reshape(1, -1, 1, 1)
        parents.append(bias)

    def grad_fn(g):
        gx = _scatter_conv(
            g, weight.data.reshape(co, -1), kh, kw, stride, padding,
            (x.shape[2], x.shape[3]), ci,
        )
        gw = _patch_outer(x.data, g, kh, kw, stride, padding, co).reshape(weight.shape)
        grads = [gx.astype(x.dtype), gw.astype(weight.dtype)]
        if bias is not None:
            grads.append(g.sum(axis=(0, 2, 3)).astype(bias.dtype))
        return tuple(grads)

    return _out(y.astype(x.dtype), tuple(parents), grad_fn)


def conv2d_transpose(x, weight, bias=None, stride=1, padding=0, output_padding=0):
    """NCHW transposed convolution; weight (C_in, C_out, kh, kw).

    Output spatial size: (H - 1)*stride - 2*padding + k + output_padding.
    """
    if x.ndim != 4 or weight.ndim != 4:
        raise ShapeError(
            f"conv2d_transpose wants 4-d tensors, got {x.shape} and {weight.shape}"
        )
    b, ci, h, w = x.shape
    wi, co, kh, kw = weight.shape
    if wi != ci:
        raise ShapeError(f"conv2d_transpose channels: input {ci} vs weight {wi}")
    if output_padding >= stride:
        raise ShapeError("output_padding must be smaller than stride")
    h_out = (h - 1) * stride - 2 * padding + kh + output_padding
    w_out = (w - 1) * stride - 2 * padding + kw + output_padding
    if h_out <= 0 or w_out <= 0:
        raise ShapeError("conv2d_transpose output size must be positive")
    y = _scatter_conv(
        x.data, weight.data.reshape(ci, -1), kh, kw, stride, padding, (h_out, w_out), co
    )
    parents = [x, weight]
    if bias is not None:
        if bias.shape != (co,):
            raise ShapeError(f"conv2d_transpose bias shape {bias.shape} != ({co},)")
        y = y + bias.data.reshape(1, -1, 1, 1)
        parents.append(bias)

    def grad_fn(g):
        gx = _gather_conv(g, weight.data.reshape(ci, -1), kh, kw, stride, padding, ci)
        gw = _patch_outer(g, x.data, kh, kw, stride, padding, ci).reshape(weight.shape)
        grads = [gx.astype(x.dtype), gw.astype(weight.dtype)]
        if bias is not None:
            grads.append(g.sum(axis=(0, 2, 3)).astype(bias.dtype))
        return tuple(grads)

    return _out(y.astype(x.dtype), tuple(parents), grad_fn)
