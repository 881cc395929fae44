"""Callback function table: two-level dispatch, pin/release semantics,
debug counters.

The table of tables holds raw callback addresses; every dispatch performs
two dependent loads (root -> row, row -> entry) and an indirect call, and
bumps the indirection counter by 2. Pin acquires the buffer's critical
flag with an atomic exchange, a real synchronization point (without one
the callback cost disappears into out-of-order overlap); release drops it.
Copy mode moves the buffer into a per-slot scratch region on pin and back
on release, counting bytes both ways.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import cfunc, njit, types, uint64

from .._intrinsics import (icall_callback, load_f64, load_u64, store_f64,
                           store_u64, xchg_u64)
from ..kernels.buffers import Buffer, allocate

__all__ = ["FunctionTable", "PinnedDescriptor", "Counters",
           "PinError", "ReleaseError", "ScratchExhaustedError",
           "PIN_INDEX", "RELEASE_INDEX", "QUERY_INDEX"]


class PinError(RuntimeError):
    pass


class ReleaseError(RuntimeError):
    pass


class ScratchExhaustedError(RuntimeError):
    pass


# state block layout, in uint64 words
_C_INDIRECTIONS = 0
_C_CALLBACKS = 1
_C_BYTES = 2
_C_ERRORS = 3
_HDR = 8
_SLOT_WORDS = 4      # addr, nbytes, pinned, scratch_addr
_W = 8               # bytes per word

PIN_INDEX = 0
RELEASE_INDEX = 1
QUERY_INDEX = 2

_CB_SIG = types.uint64(types.uint64, types.uint64)


@cfunc(_CB_SIG, cache=False)
def _pin_cb(state, slot):
    base = state + _W * (_HDR + _SLOT_WORDS * slot)
    if xchg_u64(base + 2 * _W, 1) != 0:
        store_u64(state + _C_ERRORS * _W, load_u64(state + _C_ERRORS * _W) + 1)
        return 0
    store_u64(state + _C_CALLBACKS * _W, load_u64(state + _C_CALLBACKS * _W) + 1)
    return load_u64(base)


@cfunc(_CB_SIG, cache=False)
def _release_cb(state, slot):
    base = state + _W * (_HDR + _SLOT_WORDS * slot)
    if xchg_u64(base + 2 * _W, 0) == 0:
        store_u64(state + _C_ERRORS * _W, load_u64(state + _C_ERRORS * _W) + 1)
        return 1
    store_u64(state + _C_CALLBACKS * _W, load_u64(state + _C_CALLBACKS * _W) + 1)
    return 0


@cfunc(_CB_SIG, cache=False)
def _pin_copy_cb(state, slot):
    base = state + _W * (_HDR + _SLOT_WORDS * slot)
    if xchg_u64(base + 2 * _W, 1) != 0:
        store_u64(state + _C_ERRORS * _W, load_u64(state + _C_ERRORS * _W) + 1)
        return 0
    store_u64(state + _C_CALLBACKS * _W, load_u64(state + _C_CALLBACKS * _W) + 1)
    src = load_u64(base)
    nbytes = load_u64(base + _W)
    dst = load_u64(base + 3 * _W)
    i = uint64(0)
    while i < nbytes:
        store_f64(dst + i, load_f64(src + i))
        i += uint64(8)
    store_u64(state + _C_BYTES * _W, load_u64(state + _C_BYTES * _W) + nbytes)
    return dst


@cfunc(_CB_SIG, cache=False)
def _release_copy_cb(state, slot):
    base = state + _W * (_HDR + _SLOT_WORDS * slot)
    if xchg_u64(base + 2 * _W, 0) == 0:
        store_u64(state + _C_ERRORS * _W, load_u64(state + _C_ERRORS * _W) + 1)
        return 1
    src = load_u64(base + 3 * _W)
    dst = load_u64(base)
    nbytes = load_u64(base + _W)
    i = uint64(0)
    while i < nbytes:
        store_f64(dst + i, load_f64(src + i))
        i += uint64(8)
    store_u64(state + _C_BYTES * _W, load_u64(state + _C_BYTES * _W) + nbytes)
    store_u64(state + _C_CALLBACKS * _W, load_u64(state + _C_CALLBACKS * _W) + 1)
    return 0


@cfunc(_CB_SIG, cache=False)
def _query_cb(state, slot):
    base = state + _W * (_HDR + _SLOT_WORDS * slot)
    store_u64(state + _C_CALLBACKS * _W, load_u64(state + _C_CALLBACKS * _W) + 1)
    return load_u64(base + 2 * _W)


@njit(cache=True)
def _dispatch(root, state, index, slot):
    # two dependent loads, then the indirect call
    row = load_u64(root)
    fn = load_u64(row + uint64(8) * index)
    store_u64(state, load_u64(state) + 2)
    return icall_callback(fn, state, slot)


@dataclass(frozen=True)
class Counters:
    indirections: int
    callbacks: int
    bytes_moved: int
    errors: int


@dataclass(frozen=True)
class PinnedDescriptor:
    address: int
    length: int
    slot: int
    seq: int


class FunctionTable:
    """Dispatch table plus the state block its callbacks operate on."""

    def __init__(self, copy_mode: bool = False, max_slots: int = 8,
                 scratch_limit: int = 1 << 28):
        self.copy_mode = copy_mode
        self.max_slots = max_slots
        self.scratch_limit = scratch_limit
        self._scratch_used = 0
        self._state = np.zeros(_HDR + _SLOT_WORDS * max_slots, dtype=np.uint64)
        pin = _pin_copy_cb if copy_mode else _pin_cb
        release = _release_copy_cb if copy_mode else _release_cb
        self._row = np.array([pin.address, release.address, _query_cb.address],
                             dtype=np.uint64)
        self._root = np.array([self._row.ctypes.data], dtype=np.uint64)
        self._slots: dict[int, Buffer] = {}
        self._scratch: dict[int, Buffer] = {}
        self._outstanding: dict[int, PinnedDescriptor] = {}
        self._seq = 0

    # -- addresses handed to compiled drivers -------------------------------

    @property
    def root_address(self) -> int:
        return self._root.ctypes.data

    @property
    def state_address(self) -> int:
        return self._state.ctypes.data

    # -- registration --------------------------------------------------------

    def register(self, buffer: Buffer) -> int:
        """Register a buffer; returns its slot for compiled-path dispatch."""
        for slot, buf in self._slots.items():
            if buf is buffer:
                return slot
        slot = len(self._slots)
        if slot >= self.max_slots:
            raise RuntimeError(f"function table full ({self.max_slots} slots)")
        base = _HDR + _SLOT_WORDS * slot
        self._state[base + 0] = buffer.address
        self._state[base + 1] = buffer.nbytes
        self._state[base + 2] = 0
        if self.copy_mode:
            if self._scratch_used + buffer.nbytes > self.scratch_limit:
                raise ScratchExhaustedError(
                    f"scratch limit {self.scratch_limit} bytes exceeded")
            # scratch must honor the buffer's alignment policy: the kernel
            # runs on the scratch address, and aligned vector variants
            # require packet-aligned storage there too
            scratch = allocate(buffer.length, buffer.policy)
            scratch.view[:] = 0.0
            self._scratch[slot] = scratch
            self._scratch_used += buffer.nbytes
            self._state[base + 3] = scratch.address
        self._slots[slot] = buffer
        return slot

    # -- counters -------------------------------------------------------------

    @property
    def counters(self) -> Counters:
        s = self._state
        return Counters(int(s[_C_INDIRECTIONS]), int(s[_C_CALLBACKS]),
                        int(s[_C_BYTES]), int(s[_C_ERRORS]))

    def reset_counters(self) -> None:
        self._state[_C_INDIRECTIONS:_C_ERRORS + 1] = 0

    # -- pin / release (API-level operations) ----------------------------------

    def _call(self, index: int, slot: int) -> int:
        return int(_dispatch(np.uint64(self.root_address),
                             np.uint64(self.state_address),
                             np.uint64(index), np.uint64(slot)))

    def pin(self, buffer: Buffer) -> PinnedDescriptor:
        slot = self.register(buffer)
        addr = self._call(PIN_INDEX, slot)
        if addr == 0:
            raise PinError(f"buffer in slot {slot} is already pinned")
        self._seq += 1
        desc = PinnedDescriptor(address=addr, length=buffer.length,
                                slot=slot, seq=self._seq)
        self._outstanding[desc.seq] = desc
        return desc

    def release(self, descriptor: PinnedDescriptor) -> None:
        if descriptor.seq not in self._outstanding:
            raise ReleaseError(f"descriptor {descriptor.seq} is not outstanding")
        del self._outstanding[descriptor.seq]
        rc = self._call(RELEASE_INDEX, descriptor.slot)
        if rc != 0:
            raise ReleaseError(f"slot {descriptor.slot} was not pinned")

    def query_pinned(self, buffer: Buffer) -> bool:
        slot = self.register(buffer)
        return bool(self._call(QUERY_INDEX, slot))
