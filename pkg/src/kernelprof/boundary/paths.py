"""Invocation regimes: how a kernel call crosses (or doesn't cross) a
boundary.

Every path wraps the same kernel code and must yield identical outputs;
only the per-invocation machinery differs:

* Inlined - compiled timing loop with the kernel body inlined into it.
* Outlined - same loop, but the kernel is reached through a runtime
  function address: an opaque, un-inlinable call per invocation.
* DynamicSymbol - the call hops through a forwarding wrapper into the
  dynamically loaded native library (two calls per invocation; the symbol
  is resolved once, when the call is prepared).
* CallbackPinned - a pin callback dispatched through the two-level
  function table returns the data address before the kernel runs; a
  release callback follows it.
* CallbackCopy - as CallbackPinned, but pin copies the buffer into
  scratch and release copies it back.
* NativeMemoryDirect - the kernel operates on a native-memory staging of
  the buffers; no callbacks at all.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ..kernels.buffers import KernelBuffers
from ..kernels.ids import KernelId, PINNED_ROLE, VariantId
from ..kernels.variants import cfunc_address, validate_run
from .drivers import callback_driver, inlined_driver, make_forwarder, ptr_driver
from .library import NativeLibrary
from .native import NativeRegion
from .table import FunctionTable

__all__ = ["CallPathId", "PreparedCall", "prepare", "invoke",
           "path_available", "PathUnavailableError", "IN_PROCESS_PATHS",
           "pin", "release"]


class PathUnavailableError(RuntimeError):
    pass


class CallPathId(enum.Enum):
    Inlined = "inlined"
    Outlined = "outlined"
    DynamicSymbol = "dynsym"
    CallbackPinned = "callback_pinned"
    CallbackCopy = "callback_copy"
    NativeMemoryDirect = "native_direct"

    @property
    def short(self) -> str:
        return self.value

    @classmethod
    def from_short(cls, name: str) -> "CallPathId":
        for p in cls:
            if p.value == name:
                return p
        raise ValueError(f"unknown call path {name!r}; expected one of "
                         f"{[p.value for p in cls]}")


# Paths that need no native library when targeting in-process kernels.
IN_PROCESS_PATHS = (CallPathId.Inlined, CallPathId.Outlined,
                    CallPathId.CallbackPinned, CallPathId.CallbackCopy,
                    CallPathId.NativeMemoryDirect)


def path_available(path: CallPathId, library: Optional[NativeLibrary] = None,
                   target: str = "inprocess") -> Optional[str]:
    """None when usable, else the reason it is not."""
    if path is CallPathId.DynamicSymbol or target == "native":
        if library is None:
            return "native library not loaded"
    if path is CallPathId.Inlined and target == "native":
        return "native kernels cannot be inlined into the harness loop"
    return None


@dataclass
class PreparedCall:
    """A kernel x variant bound to one call path, ready to run repeatedly."""

    path: CallPathId
    kernel: KernelId
    variant: VariantId
    bufs: KernelBuffers
    _runner: Callable
    table: Optional[FunctionTable] = None
    _regions: list = field(default_factory=list)
    _finisher: Optional[Callable] = None
    _closed: bool = False

    def run(self, iters: int):
        """Execute `iters` back-to-back invocations; returns the reduce
        accumulator for reduction kernels, else None."""
        return self._runner(np.uint64(iters))

    def finish(self, last=None):
        """Copy staged outputs back and return the kernel's output values."""
        if self._finisher is not None:
            self._finisher()
        if self.kernel is KernelId.HorizontalSum:
            return last
        if self.kernel is KernelId.ArrayAddition:
            return self.bufs.view("a")
        return self.bufs.view("y")

    def close(self) -> None:
        if not self._closed:
            for region in self._regions:
                region.free()
            self._closed = True

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def _addresses(bufs: KernelBuffers) -> tuple[int, ...]:
    return tuple(bufs.buffers[r].address for r in bufs.roles)


def _ptr_args(kernel: KernelId, addrs: tuple[int, ...], n: int) -> tuple:
    u = np.uint64
    if kernel is KernelId.ArrayAddition:
        return (u(addrs[0]), u(addrs[1]), u(n))
    if kernel is KernelId.HorizontalSum:
        return (u(addrs[0]), u(n))
    return (u(addrs[0]), u(addrs[1]), u(addrs[2]), u(n))


def _stage_native(bufs: KernelBuffers) -> tuple[NativeRegion, dict[str, int]]:
    """Copy the buffer set into one native region, honoring its alignment
    policy for every role."""
    target = bufs.policy.offset_mod32
    lengths = {r: bufs.buffers[r].length for r in bufs.roles}
    capacity = sum(8 * ln + 64 for ln in lengths.values()) + 64
    region = NativeRegion(capacity)
    offsets: dict[str, int] = {}
    cursor = 0
    for role in bufs.roles:
        while (region.base + cursor) % 32 != target:
            cursor += 8
        offsets[role] = cursor
        region.write(cursor, bufs.view(role))
        cursor += 8 * lengths[role] + 32
    addrs = {r: region.base + off for r, off in offsets.items()}
    return region, addrs


def prepare(path: CallPathId, kernel: KernelId, variant: VariantId,
            bufs: KernelBuffers, *, library: Optional[NativeLibrary] = None,
            target: str = "inprocess",
            table: Optional[FunctionTable] = None) -> PreparedCall:
    """Bind (kernel, variant, buffers) to a call path.

    `target` selects whose kernel code pointer-based paths call:
    "inprocess" (default) or "native" (requires the loaded library).
    """
    meta = validate_run(kernel, variant, bufs)
    reason = path_available(path, library, target)
    if reason is not None:
        raise PathUnavailableError(f"{path.short}: {reason}")

    n = bufs.size.n
    u = np.uint64

    if path is CallPathId.Inlined:
        driver = inlined_driver(kernel, variant)
        arrays = bufs.arrays()
        extra = (1,) if meta.needs_step else ()

        def runner(iters):
            return driver(*arrays, *extra, iters)

        return PreparedCall(path, kernel, variant, bufs, runner)

    if path is CallPathId.DynamicSymbol:
        target_addr = library.address_of(kernel, variant)
        fn = make_forwarder(meta.sigclass, target_addr)
    elif target == "native":
        fn = library.address_of(kernel, variant)
    else:
        fn = cfunc_address(kernel, variant)

    if path in (CallPathId.Outlined, CallPathId.DynamicSymbol):
        driver = ptr_driver(meta.sigclass)
        args = _ptr_args(kernel, _addresses(bufs), n)

        def runner(iters):
            return driver(u(fn), *args, iters)

        return PreparedCall(path, kernel, variant, bufs, runner)

    if path is CallPathId.NativeMemoryDirect:
        region, addrs = _stage_native(bufs)
        driver = ptr_driver(meta.sigclass)
        args = _ptr_args(kernel, tuple(addrs[r] for r in bufs.roles), n)

        def runner(iters):
            return driver(u(fn), *args, iters)

        def finisher():
            if kernel is KernelId.ArrayAddition:
                bufs.view("a")[:] = region.read(
                    addrs["a"] - region.base, bufs.buffers["a"].length)
            elif kernel is not KernelId.HorizontalSum:
                bufs.view("y")[:] = region.read(
                    addrs["y"] - region.base, bufs.buffers["y"].length)

        return PreparedCall(path, kernel, variant, bufs, runner,
                            _regions=[region], _finisher=finisher)

    # CallbackPinned / CallbackCopy
    if table is None:
        table = FunctionTable(copy_mode=(path is CallPathId.CallbackCopy))
    elif table.copy_mode != (path is CallPathId.CallbackCopy):
        raise ValueError("table copy mode does not match the call path")
    pinned = bufs.buffers[PINNED_ROLE[kernel]]
    slot = table.register(pinned)
    driver = callback_driver(meta.sigclass)
    root, state = u(table.root_address), u(table.state_address)
    addrs = {r: bufs.buffers[r].address for r in bufs.roles}

    if kernel is KernelId.ArrayAddition:
        def runner(iters):
            return driver(root, state, u(slot), u(fn), u(addrs["b"]), u(n), iters)
    elif kernel is KernelId.HorizontalSum:
        def runner(iters):
            return driver(root, state, u(slot), u(fn), u(n), iters)
    else:
        def runner(iters):
            return driver(root, state, u(slot), u(fn), u(addrs["coeffs"]),
                          u(addrs["y"]), u(n), iters)

    return PreparedCall(path, kernel, variant, bufs, runner, table=table)


def invoke(path: CallPathId, kernel: KernelId, variant: VariantId,
           bufs: KernelBuffers, *, library: Optional[NativeLibrary] = None,
           target: str = "inprocess",
           table: Optional[FunctionTable] = None):
    """One semantically transparent invocation; returns the output values."""
    prepared = prepare(path, kernel, variant, bufs, library=library,
                       target=target, table=table)
    with prepared:
        last = prepared.run(1)
        return prepared.finish(last)


def pin(table: FunctionTable, buffer):
    """Pin a buffer through the table; returns its descriptor."""
    return table.pin(buffer)


def release(table: FunctionTable, descriptor) -> None:
    """Release an outstanding pinned descriptor."""
    table.release(descriptor)
