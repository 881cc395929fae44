"""Alignment policies, determinism, and realizability of buffers."""

import numpy as np
import pytest

from kernelprof.kernels import (AlignmentPolicy, KernelId, WorkloadSize,
                                allocate, make_buffers)


@pytest.mark.parametrize("policy,residue", [
    (AlignmentPolicy.Aligned32, 0),
    (AlignmentPolicy.Misaligned8, 8),
])
def test_base_address_residue(policy, residue):
    for _ in range(20):
        bufs = make_buffers(KernelId.ArrayAddition, WorkloadSize(16), policy, seed=1)
        for buf in bufs.buffers.values():
            assert buf.address % 32 == residue


def test_contents_deterministic_across_allocations():
    a1 = make_buffers(KernelId.HornerData1st, WorkloadSize(64),
                      AlignmentPolicy.Aligned32, seed=7)
    a2 = make_buffers(KernelId.HornerData1st, WorkloadSize(64),
                      AlignmentPolicy.Aligned32, seed=7)
    for role in a1.roles:
        assert np.array_equal(a1.view(role), a2.view(role))


def test_policies_share_content_given_seed():
    a = make_buffers(KernelId.HorizontalSum, WorkloadSize(32),
                     AlignmentPolicy.Aligned32, seed=3)
    m = make_buffers(KernelId.HorizontalSum, WorkloadSize(32),
                     AlignmentPolicy.Misaligned8, seed=3)
    assert np.array_equal(a.view("a"), m.view("a"))


def test_values_in_unit_interval():
    bufs = make_buffers(KernelId.HorizontalSum, WorkloadSize(1024), seed=11)
    v = bufs.view("a")
    assert v.min() >= 0.0 and v.max() < 1.0


def test_both_policies_realizable_from_same_raw_region():
    for _ in range(10):
        buf = allocate(64, AlignmentPolicy.Aligned32)
        assert buf.address % 32 == 0
        other = buf.realigned(AlignmentPolicy.Misaligned8)
        assert other.raw is buf.raw
        assert other.address % 32 == 8


def test_overallocation_covers_offsets():
    buf = allocate(16, AlignmentPolicy.Misaligned8)
    assert buf.raw.shape[0] >= buf.length + 4
    assert 0 <= buf.base_offset <= 3
