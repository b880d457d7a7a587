"""Central finite-difference gradient checking (float64)."""

import numpy as np

from procdyn.engine.tensor import Tensor


def relative_error(analytic, numeric, floor=1e-6):
    """max |a - n| / max(|a|, |n|, floor) over all elements."""
    a = np.asarray(analytic, dtype=np.float64)
    n = np.asarray(numeric, dtype=np.float64)
    denom = np.maximum(np.maximum(np.abs(a), np.abs(n)), floor)
    return float(np.max(np.abs(a - n) / denom))


def numeric_grad(fn, arrays, index, h=1e-5):
    """Central-difference gradient of scalar fn(*arrays) wrt arrays[index]."""
    base = [np.array(a, dtype=np.float64) for a in arrays]
    target = base[index]
    grad = np.zeros_like(target)
    flat = target.reshape(-1)
    gflat = grad.reshape(-1)
    for i in range(flat.size):
        orig = flat[i]
        flat[i] = orig + h
        fp = float(fn(*base))
        flat[i] = orig - h
        fm = float(fn(*base))
        flat[i] = orig
        gflat[i] = (fp - fm) / (2.0 * h)
    return grad


def check_gradients(tensor_fn, arrays, h=1e-5, floor=1e-6):
    """Compare tape gradients of scalar tensor_fn(*tensors) against FD.

    tensor_fn receives Tensors built from `arrays` (float64, requires_grad)
    and must return a scalar Tensor. For the numeric side it is re-run on
    fresh Tensors around perturbed inputs. Returns max relative error over
    all inputs.
    """
    tensors = [Tensor(np.array(a, dtype=np.float64), requires_grad=True) for a in arrays]
    loss = tensor_fn(*tensors)
    loss.backward()

    def plain(*arrs):
        with_tensors = [Tensor(a) for a in arrs]
        return tensor_fn(*with_tensors).item()

    worst = 0.0
    for i, t in enumerate(tensors):
        fd = numeric_grad(plain, arrays, i, h=h)
        analytic = t.grad if t.grad is not None else np.zeros_like(fd)
        worst = max(worst, relative_error(analytic, fd, floor=floor))
    return worst
