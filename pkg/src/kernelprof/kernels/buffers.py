"""Alignment-controlled buffer construction.

Buffers over-allocate and pick a base offset so the logical array starts at
a chosen address residue mod 32, realizing either policy from the same raw
region by base-offset adjustment alone.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ids import (AlignmentPolicy, KernelId, WorkloadSize, buffer_lengths,
                  KERNEL_ROLES)

# Extra elements beyond the logical length; 4 suffice to reach any residue,
# doubled for slack.
OVERALLOCATION = 8


@dataclass
class Buffer:
    """One contiguous double-precision array with an explicit base offset."""

    raw: np.ndarray
    base_offset: int
    policy: AlignmentPolicy
    length: int

    @property
    def view(self) -> np.ndarray:
        return self.raw[self.base_offset:self.base_offset + self.length]

    @property
    def address(self) -> int:
        return self.view.ctypes.data

    @property
    def nbytes(self) -> int:
        return self.length * 8

    def realigned(self, policy: AlignmentPolicy) -> "Buffer":
        """Same raw region under the other policy (contents not moved)."""
        off = _offset_for(self.raw, policy)
        return Buffer(raw=self.raw, base_offset=off, policy=policy,
                      length=self.length)


def _offset_for(raw: np.ndarray, policy: AlignmentPolicy) -> int:
    addr = raw.ctypes.data
    target = policy.offset_mod32
    for k in range(4):
        if (addr + 8 * k) % 32 == target:
            return k
    raise AssertionError("unreachable: 8-byte-aligned storage spans all residues")


def allocate(length: int, policy: AlignmentPolicy) -> Buffer:
    raw = np.empty(length + OVERALLOCATION, dtype=np.float64)
    off = _offset_for(raw, policy)
    return Buffer(raw=raw, base_offset=off, policy=policy, length=length)


@dataclass
class KernelBuffers:
    """The full buffer set one kernel invocation operates on."""

    kernel: KernelId
    size: WorkloadSize
    policy: AlignmentPolicy
    buffers: dict[str, Buffer]

    def view(self, role: str) -> np.ndarray:
        return self.buffers[role].view

    def arrays(self) -> tuple[np.ndarray, ...]:
        return tuple(self.view(r) for r in KERNEL_ROLES[self.kernel])

    @property
    def roles(self) -> tuple[str, ...]:
        return KERNEL_ROLES[self.kernel]


def make_buffers(kernel: KernelId, size: WorkloadSize,
                 policy: AlignmentPolicy = AlignmentPolicy.Aligned32,
                 seed: int = 0) -> KernelBuffers:
    """Allocate and fill the kernel's buffers with reproducible uniforms.

    Contents are drawn from [0, 1) with a per-role stream so identical
    (kernel, size, policy, seed) yields bit-identical contents regardless
    of where the allocator placed the raw storage.
    """
    rng = np.random.default_rng(seed)
    bufs: dict[str, Buffer] = {}
    for role, length in buffer_lengths(kernel, size).items():
        buf = allocate(length, policy)
        if role == "y":
            buf.view[:] = 0.0
        else:
            buf.view[:] = rng.random(length)
        bufs[role] = buf
    return KernelBuffers(kernel=kernel, size=size, policy=policy, buffers=bufs)
