"""Primitive ops: forward values plus tape registration.

Each op validates shapes/dtypes, computes the numpy forward, and registers
a closure mapping the output gradient to parent gradients. Binary ops
broadcast across leading batch dimensions only.
"""

import numpy as np

from procdyn.engine.tensor import DtypeError, ShapeError, Tensor

# Set True to assert finite outputs after every op (debug aid).
CHECK_FINITE = False


def _wrap(x, like=None):
    if isinstance(x, Tensor):
        return x
    dtype = like.dtype if like is not None else None
    if np.isscalar(x) or isinstance(x, (int, float)):
        return Tensor(np.asarray(x, dtype=dtype or np.float64))
    arr = np.asarray(x)
    if like is not None and arr.dtype != like.dtype:
        if arr.dtype in (np.dtype(np.float32), np.dtype(np.float64)):
            raise DtypeError(f"dtype mismatch: {arr.dtype} vs {like.dtype}")
        arr = arr.astype(like.dtype)
    return Tensor(arr)


def _pair(a, b):
    if isinstance(a, Tensor) and isinstance(b, Tensor):
        if a.dtype != b.dtype:
            raise DtypeError(f"dtype mismatch: {a.dtype} vs {b.dtype}")
        return a, b
    if isinstance(a, Tensor):
        return a, _wrap(b, like=a)
    return _wrap(a, like=b), b


def _check_broadcast(sa, sb):
    """Allow equal shapes, scalars, or trailing-shape (leading-dim) matches."""
    if sa == sb or sa == () or sb == ():
        return
    small, big = (sa, sb) if len(sa) <= len(sb) else (sb, sa)
    if big[len(big) - len(small):] != small or (len(small) == len(big) and sa != sb):
        raise ShapeError(f"shapes {sa} and {sb} broadcast beyond leading dims")


def _reduce_to(grad, shape):
    """Sum grad down to `shape` (undo leading-dim broadcast)."""
    if grad.shape == shape:
        return grad
    if shape == ():
        return np.asarray(grad.sum(), dtype=grad.dtype)
    extra = grad.ndim - len(shape)
    if extra > 0:
        grad = grad.sum(axis=tuple(range(extra)))
    return grad


def _out(data, parents, grad_fn):
    if CHECK_FINITE and not np.all(np.isfinite(data)):
        raise FloatingPointError("non-finite value in forward pass")
    return Tensor._from_op(data, parents, grad_fn)


# -- arithmetic -----------------------------------------------------------------


def add(a, b):
    a, b = _pair(a, b)
    _check_broadcast(a.shape, b.shape)
    data = a.data + b.data

    def grad_fn(g):
        return _reduce_to(g, a.shape), _reduce_to(g, b.shape)

    return _out(data, (a, b), grad_fn)


def sub(a, b):
    a, b = _pair(a, b)
    _check_broadcast(a.shape, b.shape)
    data = a.data - b.data

    def grad_fn(g):
        return _reduce_to(g, a.shape), _reduce_to(-g, b.shape)

    return _out(data, (a, b), grad_fn)


def mul(a, b):
    a, b = _pair(a, b)
    _check_broadcast(a.shape, b.shape)
    data = a.data * b.data

    def grad_fn(g):
        return _reduce_to(g * b.data, a.shape), _reduce_to(g * a.data, b.shape)

    return _out(data, (a, b), grad_fn)


def div(a, b):
    a, b = _pair(a, b)
    _check_broadcast(a.shape, b.shape)
    data = a.data / b.data

    def grad_fn(g):
        ga = _reduce_to(g / b.data, a.shape)
        gb = _reduce_to(-g * a.data / (b.data * b.data), b.shape)
        return ga, gb

    return _out(data, (a, b), grad_fn)


def neg(a):
    return _out(-a.data, (a,), lambda g: (-g,))


def pow_const(a, exponent):
    e = float(exponent)
    data = a.data ** e

    def grad_fn(g):
        return (g * e * a.data ** (e - 1.0),)

    return _out(data, (a,), grad_fn)


# -- elementwise nonlinearities ---------------------------------------------------


def relu(a):
    mask = a.data > 0
    return _out(np.where(mask, a.data, 0.0).astype(a.dtype), (a,),
                lambda g: (np.where(mask, g, 0.0).astype(g.dtype),))


def exp(a):
    y = np.exp(a.data)
    return _out(y, (a,), lambda g: (g * y,))


def log(a):
    return _out(np.log(a.data), (a,), lambda g: (g / a.data,))


def sqrt(a):
    y = np.sqrt(a.data)
    return _out(y, (a,), lambda g: (g * (0.5 / y),))


def sin(a):
    return _out(np.sin(a.data), (a,), lambda g: (g * np.cos(a.data),))


def cos(a):
    return _out(np.cos(a.data), (a,), lambda g: (-g * np.sin(a.data),))


def tanh(a):
    y = np.tanh(a.data)
    return _out(y, (a,), lambda g: (g * (1.0 - y * y),))


def sigmoid(a):
    y = 1.0 / (1.0 + np.exp(-a.data))
    return _out(y.astype(a.dtype), (a,), lambda g: (g * y * (1.0 - y),))


def cast(a, dtype):
    dtype = np.dtype(dtype)
    data = a.data.astype(dtype)

    def grad_fn(g):
        return (g.astype(a.dtype),)

    return _out(data, (a,), grad_fn)


# -- shape manipulation -----------------------------------------------------------


def reshape(a, shape):
    old = a.shape
    data = a.data.reshape(shape)

    def grad_fn(g):
        return (g.reshape(old),)

    return _out(data, (a,), grad_fn)


def transpose(a, axes):
    axes = tuple(axes)
    inv = tuple(np.argsort(axes))
    return _out(np.transpose(a.data, axes), (a,),
                lambda g: (np.ascontiguousarray(np.transpose(g, inv)),))


def tile(a, reps):
    reps = tuple(int(r) for r in reps)
    data = np.tile(a.data, reps)
    # np.tile prepends axes when reps is longer than a.ndim
    shape = a.shape
    if len(reps) < len(shape):
        reps = (1,) * (len(shape) - len(reps)) + reps
    if len(reps) > len(shape):
        shape = (1,) * (len(reps) - len(shape)) + shape

    def grad_fn(g):
        folded = g.reshape(tuple(x for r, s in zip(reps, shape) for x in (r, s)))
        summed = folded.sum(axis=tuple(range(0, 2 * len(shape), 2)))
        return (np.ascontiguousarray(summed.reshape(a.shape)),)

    return _out(data, (a,), grad_fn)


def getitem(a, key):
    data = np.array(a.data[key], dtype=a.dtype)  # copy; keeps 0-d as 0-d

    def grad_fn(g):
        buf = np.zeros_like(a.data)
        np.add.at(buf, key, g)
        return (buf,)

    return _out(data, (a,), grad_fn)


def concat(parts, axis):
    parts = [p if isinstance(p, Tensor) else Tensor(p) for p in parts]
    dtypes = {p.dtype for p in parts}
    if len(dtypes) > 1:
        raise DtypeError(f"concat dtype mismatch: {sorted(str(d) for d in dtypes)}")
    data = np.concatenate([p.data for p in parts], axis=axis)
    sizes = [p.shape[axis] for p in parts]
    offsets = np.cumsum([0] + sizes)

    def grad_fn(g):
        slicer = [slice(None)] * g.ndim
        out = []
        for i in range(len(parts)):
            slicer[axis] = slice(offsets[i], offsets[i + 1])
            out.append(np.ascontiguousarray(g[tuple(slicer)]))
        return tuple(out)

    return _out(data, tuple(parts), grad_fn)


def split(a, num_parts, axis=-1):
    """Split into equal parts along axis; returns a list of tensors."""
    if a.shape[axis] % num_parts != 0:
        raise ShapeError(
            f"axis {axis} of shape {a.shape} not divisible into {num_parts} parts"
        )
    size = a.shape[axis] // num_parts
    outs = []
    ax = axis % a.ndim
    for i in range(num_parts):
        slicer = [slice(None)] * a.ndim
        slicer[ax] = slice(i * size, (i + 1) * size)
        key = tuple(slicer)
        data = np.ascontiguousarray(a.data[key])

        def grad_fn(g, key=key):
            buf = np.zeros_like(a.data)
            buf[key] = g
            return (buf,)

        outs.append(_out(data, (a,), grad_fn))
    return outs


def stack(parts, axis):
    parts = list(parts)
    ax = axis % (parts[0].ndim + 1) if not isinstance(axis, tuple) else axis
    expanded = []
    for p in parts:
        p = p if isinstance(p, Tensor) else Tensor(p)
        shape = list(p.shape)
        shape.insert(ax, 1)
        expanded.append(reshape(p, tuple(shape)))
    return concat(expanded, axis=ax)


# -- reductions ---------------------------------------------------------------------


def sum_(a, axis=None, keepdims=False):
    data = a.data.sum(axis=axis, keepdims=keepdims)

    def grad_fn(g):
        if axis is None:
            g2 = np.asarray(g).reshape((1,) * a.ndim)
            return (np.broadcast_to(g2, a.shape).astype(a.dtype, copy=True),)
        g2 = g
        if not keepdims:
            axes = (axis,) if np.isscalar(axis) else tuple(axis)
            axes = tuple(ax % a.ndim for ax in axes)
            for ax in sorted(axes):
                g2 = np.expand_dims(g2, ax)
        return (np.broadcast_to(g2, a.shape).copy(),)

    return _out(np.asarray(data, dtype=a.dtype), (a,), grad_fn)


def mean(a, axis=None, keepdims=False):
    if axis is None:
        count = a.size
    else:
        axes = (axis,) if np.isscalar(axis) else tuple(axis)
        count = int(np.prod([a.shape[ax % a.ndim] for ax in axes]))
    return mul(sum_(a, axis=axis, keepdims=keepdims), 1.0 / count)


def mse(a, b):
    """Mean squared error over every element."""
    a, b = _pair(a, b)
    if a.shape != b.shape:
        raise ShapeError(f"mse shapes differ: {a.shape} vs {b.shape}")
    diff = sub(a, b)
    return mean(mul(diff, diff))


# -- linear algebra -------------------------------------------------------------------


def matmul(a, b):
    a, b = _pair(a, b)
    if a.ndim < 2 or b.ndim < 2:
        raise ShapeError(f"matmul needs >=2-d operands, got {a.shape} @ {b.shape}")
    if a.shape[-1] != b.shape[-2]:
        raise ShapeError(f"matmul inner dims differ: {a.shape} @ {b.shape}")
    _check_broadcast(a.shape[:-2], b.shape[:-2])
    data = a.data @ b.data

    def grad_fn(g):
        ga = _reduce_to(g @ np.swapaxes(b.data, -1, -2), a.shape)
        gb = _reduce_to(np.swapaxes(a.data, -1, -2) @ g, b.shape)
        return ga, gb

    return _out(data, (a, b), grad_fn)


def linear(x, weight, bias=None):
    """x @ weight (+ bias); weight is (in_dim, out_dim), bias (out_dim,)."""
    y = matmul(x, weight)
    if bias is not None:
        y = add(y, bias)
    return y


# -- normalization and attention ---------------------------------------------------------


def softmax(a, axis=-1):
    shifted = a.data - a.data.max(axis=axis, keepdims=True)
    e = np.exp(shifted)
    y = e / e.sum(axis=axis, keepdims=True)

    def grad_fn(g):
        dot = (g * y).sum(axis=axis, keepdims=True)
        return ((g - dot) * y,)

    return _out(y.astype(a.dtype), (a,), grad_fn)


def layer_norm(x, gamma, beta, eps=1e-5):
    """Normalize the last axis, then scale and shift."""
    if gamma.shape != x.shape[-1:] or beta.shape != x.shape[-1:]:
        raise ShapeError(
            f"layer_norm affine shapes {gamma.shape}/{beta.shape} do not match "
            f"feature dim of {x.shape}"
        )
    mu = x.data.mean(axis=-1, keepdims=True)
    var = x.data.var(axis=-1, keepdims=True)
    inv = 1.0 / np.sqrt(var + eps)
    xhat = (x.data - mu) * inv
    y = xhat * gamma.data + beta.data
    n = x.shape[-1]

    def grad_fn(g):
        dxhat = g * gamma.data
        dx = (
            dxhat
            - dxhat.mean(axis=-1, keepdims=True)
            - xhat * (dxhat * xhat).mean(axis=-1, keepdims=True)
        ) * inv
        dgamma = (g * xhat).reshape(-1, n).sum(axis=0)
        dbeta = g.reshape(-1, n).sum(axis=0)
        return dx.astype(x.dtype), dgamma.astype(gamma.dtype), dbeta.astype(beta.dtype)

    return _out(y.astype(x.dtype), (x, gamma, beta), grad_fn)


def embedding_add(x, table):
    """Add a positional table (trailing shape of x) across leading dims."""
    return add(x, table)


def scaled_dot_attention(q, k, v):
    """softmax(q k^T / sqrt(d)) v over the last two axes."""
    d = q.shape[-1]
    scores = mul(matmul(q, transpose(k, tuple(range(k.ndim - 2)) + (k.ndim - 1, k.ndim - 2))),
                 1.0 / np.sqrt(d))
    return matmul(softmax(scores, axis=-1), v)
