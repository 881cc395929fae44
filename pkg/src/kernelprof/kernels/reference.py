"""Reference oracle: straightforward left-to-right scalar evaluation.

Independent of the compiled variants - plain Python/numpy element-wise
operations only, deterministic for given inputs.
"""

from __future__ import annotations

import numpy as np

from .buffers import KernelBuffers
from .ids import KernelId


class SizeMismatchError(ValueError):
    pass


def _as_arrays(kernel: KernelId, inputs) -> tuple[np.ndarray, ...]:
    if isinstance(inputs, KernelBuffers):
        if inputs.kernel is not kernel:
            raise SizeMismatchError(
                f"buffers built for {inputs.kernel.short}, not {kernel.short}")
        return inputs.arrays()
    return tuple(np.asarray(a, dtype=np.float64) for a in inputs)


def run_reference(kernel: KernelId, inputs):
    """Evaluate the kernel by definition; returns its output values.

    ArrayAddition mutates and returns a; HorizontalSum returns the sum;
    Horner kernels fill and return y.
    """
    arrays = _as_arrays(kernel, inputs)

    if kernel is KernelId.ArrayAddition:
        a, b = arrays
        if a.shape != b.shape:
            raise SizeMismatchError(f"a has {a.shape[0]} elements, b {b.shape[0]}")
        a += b
        return a

    if kernel is KernelId.HorizontalSum:
        (a,) = arrays
        s = 0.0
        for v in a.tolist():
            s += v
        return s

    coeffs, x, y = arrays
    if x.shape != y.shape:
        raise SizeMismatchError(f"x has {x.shape[0]} elements, y {y.shape[0]}")
    # Horner chain, highest-degree coefficient first; element-wise numpy ops
    # keep each point's operation order identical to the scalar chain.
    y[:] = coeffs[0]
    for k in range(1, coeffs.shape[0]):
        y *= x
        y += coeffs[k]
    return y
