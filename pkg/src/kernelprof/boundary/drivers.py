"""Compiled timing drivers: the inner measurement loops for every call path.

One driver per (signature class, path family). Pointer drivers make an
un-inlinable indirect call per invocation (the target address is a runtime
value); callback drivers add the pin/release dispatches around it; inlined
drivers are built per kernel variant so LLVM inlines the body into the loop.
Reduction results are accumulated and returned so the work cannot be
dead-code-eliminated.
"""

from __future__ import annotations

from typing import Callable

from numba import cfunc, njit, types, uint64

from .._intrinsics import (icall_callback, icall_horner,
                           icall_inplace_binary, icall_reduce, load_u64,
                           store_u64)
from ..kernels.ids import KernelId, VariantId
from ..kernels.variants import variant_meta

__all__ = ["ptr_driver", "callback_driver", "inlined_driver",
           "make_forwarder"]


# -- pointer paths: Outlined / DynamicSymbol / NativeMemoryDirect -----------

@njit(cache=True)
def _drive_ptr_inplace(fn, a, b, n, iters):
    for _ in range(iters):
        icall_inplace_binary(fn, a, b, n)


@njit(cache=True)
def _drive_ptr_reduce(fn, a, n, iters):
    acc = 0.0
    for _ in range(iters):
        acc += icall_reduce(fn, a, n)
    return acc


@njit(cache=True)
def _drive_ptr_horner(fn, coeffs, x, y, n, iters):
    for _ in range(iters):
        icall_horner(fn, coeffs, x, y, n)


_PTR_DRIVERS = {
    "inplace_binary": _drive_ptr_inplace,
    "reduce": _drive_ptr_reduce,
    "horner": _drive_ptr_horner,
}


def ptr_driver(sigclass: str) -> Callable:
    return _PTR_DRIVERS[sigclass]


# -- callback paths: CallbackPinned / CallbackCopy ---------------------------
# Per invocation: pin the designated buffer through the two-level table,
# run the kernel on the returned address, release. The indirection counter
# (state word 0) is bumped by 2 per dispatch.

@njit(cache=True)
def _drive_cb_inplace(root, state, slot, kern, b_addr, n, iters):
    for _ in range(iters):
        row = load_u64(root)
        pin_fn = load_u64(row)
        store_u64(state, load_u64(state) + 2)
        a_addr = icall_callback(pin_fn, state, slot)
        icall_inplace_binary(kern, a_addr, b_addr, n)
        row = load_u64(root)
        rel_fn = load_u64(row + uint64(8))
        store_u64(state, load_u64(state) + 2)
        icall_callback(rel_fn, state, slot)


@njit(cache=True)
def _drive_cb_reduce(root, state, slot, kern, n, iters):
    acc = 0.0
    for _ in range(iters):
        row = load_u64(root)
        pin_fn = load_u64(row)
        store_u64(state, load_u64(state) + 2)
        a_addr = icall_callback(pin_fn, state, slot)
        acc += icall_reduce(kern, a_addr, n)
        row = load_u64(root)
        rel_fn = load_u64(row + uint64(8))
        store_u64(state, load_u64(state) + 2)
        icall_callback(rel_fn, state, slot)
    return acc


@njit(cache=True)
def _drive_cb_horner(root, state, slot, kern, coeffs, y, n, iters):
    for _ in range(iters):
        row = load_u64(root)
        pin_fn = load_u64(row)
        store_u64(state, load_u64(state) + 2)
        x_addr = icall_callback(pin_fn, state, slot)
        icall_horner(kern, coeffs, x_addr, y, n)
        row = load_u64(root)
        rel_fn = load_u64(row + uint64(8))
        store_u64(state, load_u64(state) + 2)
        icall_callback(rel_fn, state, slot)


_CB_DRIVERS = {
    "inplace_binary": _drive_cb_inplace,
    "reduce": _drive_cb_reduce,
    "horner": _drive_cb_horner,
}


def callback_driver(sigclass: str) -> Callable:
    return _CB_DRIVERS[sigclass]


# -- Inlined path -------------------------------------------------------------
# A driver compiled per kernel variant: the variant is a closure constant,
# so LLVM inlines its body into the timing loop. Scalar variants receive
# their stride as a runtime argument to keep their codegen scalar even
# after inlining.

_INLINED_CACHE: dict[tuple[KernelId, VariantId], Callable] = {}


def _build_inlined(kernel: KernelId, variant: VariantId) -> Callable:
    meta = variant_meta(kernel, variant)
    fn = meta.fn

    if meta.sigclass == "inplace_binary":
        if meta.needs_step:
            @njit(cache=False)
            def drive(a, b, step, iters):
                for _ in range(iters):
                    fn(a, b, step)
        else:
            @njit(cache=False)
            def drive(a, b, iters):
                for _ in range(iters):
                    fn(a, b)
    elif meta.sigclass == "reduce":
        if meta.needs_step:
            @njit(cache=False)
            def drive(a, step, iters):
                acc = 0.0
                for _ in range(iters):
                    acc += fn(a, step)
                return acc
        else:
            @njit(cache=False)
            def drive(a, iters):
                acc = 0.0
                for _ in range(iters):
                    acc += fn(a)
                return acc
    else:
        if meta.needs_step:
            @njit(cache=False)
            def drive(coeffs, x, y, step, iters):
                for _ in range(iters):
                    fn(coeffs, x, y, step)
        else:
            @njit(cache=False)
            def drive(coeffs, x, y, iters):
                for _ in range(iters):
                    fn(coeffs, x, y)
    return drive


def inlined_driver(kernel: KernelId, variant: VariantId) -> Callable:
    key = (kernel, variant)
    if key not in _INLINED_CACHE:
        _INLINED_CACHE[key] = _build_inlined(kernel, variant)
    return _INLINED_CACHE[key]


# -- DynamicSymbol forwarders -------------------------------------------------
# Models the wrapper hop: the driver indirect-calls the forwarder, which
# then calls the library symbol (resolved once, when the forwarder is
# built). Two physical calls per invocation.

_SIG_INPLACE = types.void(types.CPointer(types.float64),
                          types.CPointer(types.float64), types.uint64)
_SIG_REDUCE = types.float64(types.CPointer(types.float64), types.uint64)
_SIG_HORNER = types.void(types.CPointer(types.float64),
                         types.CPointer(types.float64),
                         types.CPointer(types.float64), types.uint64)

_FORWARDER_CACHE: dict[tuple[str, int], object] = {}


def _build_forwarder(sigclass: str, target: int):
    if sigclass == "inplace_binary":
        @cfunc(_SIG_INPLACE, cache=False)
        def fwd(a, b, n):
            icall_inplace_binary(target, a, b, n)
    elif sigclass == "reduce":
        @cfunc(_SIG_REDUCE, cache=False)
        def fwd(a, n):
            return icall_reduce(target, a, n)
    else:
        @cfunc(_SIG_HORNER, cache=False)
        def fwd(coeffs, x, y, n):
            icall_horner(target, coeffs, x, y, n)
    return fwd


def make_forwarder(sigclass: str, target: int) -> int:
    """Address of a forwarding wrapper around `target` (built once each)."""
    key = (sigclass, target)
    if key not in _FORWARDER_CACHE:
        _FORWARDER_CACHE[key] = _build_forwarder(sigclass, target)
    return _FORWARDER_CACHE[key].address
