"""Dense tensors with a reverse-mode tape.

Storage is a numpy array (float32 or float64). Every op records its parents
and a closure producing parent gradients; backward() walks the tape once in
reverse topological order and then frees it, so peak tape size is bounded
by the ops of a single forward pass.

Broadcasting is allowed only across leading batch dimensions (an operand
may match the trailing shape of the other); anything else must be tiled or
reshaped explicitly.
"""

import contextlib

import numpy as np

from procdyn import ProcdynError

FLOAT_DTYPES = (np.float32, np.float64)

_grad_enabled = True


class ShapeError(ProcdynError):
    pass


class DtypeError(ProcdynError):
    pass


class TapeError(ProcdynError):
    pass


@contextlib.contextmanager
def no_grad():
    """Disable tape recording inside the block."""
    global _grad_enabled
    prev = _grad_enabled
    _grad_enabled = False
    try:
        yield
    finally:
        _grad_enabled = prev


def grad_enabled() -> bool:
    return _grad_enabled


class Tensor:
    is_autodiff_tensor = True

    __slots__ = ("data", "grad", "requires_grad", "_parents", "_grad_fn", "_freed")

    def __init__(self, data, requires_grad=False, dtype=None):
        arr = np.asarray(data, dtype=dtype)
        if arr.dtype not in (np.dtype(np.float32), np.dtype(np.float64)):
            arr = arr.astype(np.float64)
        self.data = arr
        self.grad = None
        self.requires_grad = bool(requires_grad)
        self._parents = ()
        self._grad_fn = None
        self._freed = False

    # -- construction helpers -------------------------------------------------

    @classmethod
    def _from_op(cls, data, parents, grad_fn):
        out = cls.__new__(cls)
        out.data = data
        out.grad = None
        out._freed = False
        if _grad_enabled and any(p.requires_grad for p in parents):
            out.requires_grad = True
            out._parents = tuple(parents)
            out._grad_fn = grad_fn
        else:
            out.requires_grad = False
            out._parents = ()
            out._grad_fn = None
        return out

    # -- basic protocol --------------------------------------------------------

    @property
    def shape(self):
        return self.data.shape

    @property
    def ndim(self):
        return self.data.ndim

    @property
    def size(self):
        return self.data.size

    @property
    def dtype(self):
        return self.data.dtype

    def __repr__(self):
        grad = ", grad" if self.requires_grad else ""
        return f"Tensor(shape={self.data.shape}, dtype={self.data.dtype.name}{grad})"

    def item(self) -> float:
        return float(self.data)

    def detach(self) -> "Tensor":
        return Tensor(self.data, requires_grad=False)

    def astype(self, dtype) -> "Tensor":
        from procdyn.engine import ops

        return ops.cast(self, dtype)

    # -- autodiff ---------------------------------------------------------------

    def backward(self):
        if self.data.size != 1:
            raise ShapeError(f"backward needs a scalar loss, got shape {self.shape}")
        if self._freed:
            raise TapeError("tape already freed; rerun the forward pass")
        if not self.requires_grad:
            raise TapeError("loss is detached from every parameter")

        topo = []
        visited = set()
        stack = [(self, False)]
        while stack:
            node, processed = stack.pop()
            if processed:
                topo.append(node)
                continue
            if id(node) in visited:
                continue
            visited.add(id(node))
            stack.append((node, True))
            for p in node._parents:
                if p.requires_grad and not p._freed:
                    stack.append((p, False))

        self.grad = np.ones_like(self.data)
        for node in reversed(topo):
            if node._grad_fn is None or node.grad is None:
                continue
            parent_grads = node._grad_fn(node.grad)
            for parent, g in zip(node._parents, parent_grads):
                if g is None or not parent.requires_grad:
                    continue
                if parent.grad is None:
                    parent.grad = g if g.flags.owndata else g.copy()
                else:
                    parent.grad += g
        for node in topo:
            if node._grad_fn is not None:
                node._parents = ()
                node._grad_fn = None
                node._freed = True
                if node is not self:
                    node.grad = None  # keep grads on leaves only

    # -- operators (implemented in ops; imported lazily to avoid cycles) --------

    def _binary(self, other, fn):
        from procdyn.engine import ops

        return fn(self, other)

    def __add__(self, other):
        from procdyn.engine import ops

        return ops.add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        from procdyn.engine import ops

        return ops.sub(self, other)

    def __rsub__(self, other):
        from procdyn.engine import ops

        return ops.sub(other, self)

    def __mul__(self, other):
        from procdyn.engine import ops

        return ops.mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        from procdyn.engine import ops

        return ops.div(self, other)

    def __rtruediv__(self, other):
        from procdyn.engine import ops

        return ops.div(other, self)

    def __neg__(self):
        from procdyn.engine import ops

        return ops.neg(self)

    def __pow__(self, exponent):
        from procdyn.engine import ops

        return ops.pow_const(self, exponent)

    def __matmul__(self, other):
        from procdyn.engine import ops

        return ops.matmul(self, other)

    def __getitem__(self, key):
        from procdyn.engine import ops

        return ops.getitem(self, key)

    def reshape(self, shape):
        from procdyn.engine import ops

        return ops.reshape(self, shape)

    def transpose(self, axes):
        from procdyn.engine import ops

        return ops.transpose(self, axes)

    def tile(self, reps):
        from procdyn.engine import ops

        return ops.tile(self, reps)

    def sum(self, axis=None, keepdims=False):
        from procdyn.engine import ops

        return ops.sum_(self, axis=axis, keepdims=keepdims)

    def mean(self, axis=None, keepdims=False):
        from procdyn.engine import ops

        return ops.mean(self, axis=axis, keepdims=keepdims)

    def sqrt(self):
        from procdyn.engine import ops

        return ops.sqrt(self)

    def sin(self):
        from procdyn.engine import ops

        return ops.sin(self)

    def cos(self):
        from procdyn.engine import ops

        return ops.cos(self)

    def exp(self):
        from procdyn.engine import ops

        return ops.exp(self)

    def tanh(self):
        from procdyn.engine import ops

        return ops.tanh(self)


class ParameterBase(Tensor):
    """Marker base so backward() keeps gradients on parameters only."""

    __slots__ = ("name", "lr_scale")


class Parameter(ParameterBase):
    """Named trainable tensor with a per-parameter learning-rate multiplier."""

    def __init__(self, data, name: str, lr_scale: float = 1.0, dtype=np.float32):
        super().__init__(np.array(data, dtype=dtype), requires_grad=True)
        self.name = name
        self.lr_scale = float(lr_scale)

    def __repr__(self):
        return f"Parameter({self.name!r}, shape={self.data.shape}, dtype={self.data.dtype.name})"
