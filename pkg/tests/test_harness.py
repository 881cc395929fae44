"""Measurement mechanics: size grids, sample points, sweeps, the lock."""

import pytest

from kernelprof.boundary import CallPathId
from kernelprof.harness import (DEFAULT_MAX_BYTES, DEFAULT_MIN_BYTES,
                                MeasurementConfig, Profile, SamplePoint,
                                SweepError, geometric_sizes, measure_point,
                                sweep)
from kernelprof.kernels import (AlignmentPolicy, KernelId, VariantId,
                                WorkloadSize, memory_per_invocation)
from kernelprof.labels import label_for

FAST = MeasurementConfig(min_inner_time=0.002, outer_reps=3, warmup_passes=1)


def test_geometric_sizes_hsum_example():
    sizes = geometric_sizes(KernelId.HorizontalSum, 256, 1024, 2)
    assert [8 * s.n for s in sizes] == [256, 512, 1024]


def test_geometric_sizes_default_count():
    sizes = geometric_sizes(KernelId.ArrayAddition, DEFAULT_MIN_BYTES,
                            DEFAULT_MAX_BYTES, 2)
    assert len(sizes) == 19
    sizes = geometric_sizes(KernelId.HorizontalSum, DEFAULT_MIN_BYTES,
                            DEFAULT_MAX_BYTES, 2)
    assert len(sizes) == 19


def test_geometric_sizes_single():
    assert len(geometric_sizes(KernelId.HorizontalSum, 4096, 4096, 2)) == 1


def test_geometric_sizes_unsatisfiable():
    assert geometric_sizes(KernelId.HorizontalSum, 1024, 512) == []


def test_geometric_sizes_horner_strides():
    sizes = geometric_sizes(KernelId.HornerData1st, 256, 1 << 20, 2)
    assert all(s.n % 32 == 0 for s in sizes)
    ns = [s.n for s in sizes]
    assert ns == sorted(set(ns))


def test_measure_point_identity():
    size = WorkloadSize(4096)
    pt = measure_point(KernelId.HorizontalSum, VariantId.Scalar,
                       CallPathId.Inlined, size, FAST)
    assert pt.performance == pt.flop_per_invocation / pt.best_mean_seconds
    assert pt.performance > 0
    assert pt.best_mean_seconds == min(pt.rep_means)
    assert pt.inner_iters_used >= 1
    assert pt.memory_per_invocation == memory_per_invocation(
        KernelId.HorizontalSum, size)


def test_sample_point_rejects_bad_best():
    with pytest.raises(ValueError):
        SamplePoint(memory_per_invocation=8, flop_per_invocation=1,
                    best_mean_seconds=2.0, performance=0.5,
                    inner_iters_used=1, rep_means=(1.0, 1.5))


def test_sweep_point_count_and_order():
    sizes = geometric_sizes(KernelId.HorizontalSum, 256, 4096, 2)
    prof = sweep(KernelId.HorizontalSum, VariantId.Scalar, CallPathId.Inlined,
                 sizes, FAST)
    assert len(prof.points) == len(sizes)
    mems = prof.mem_bytes
    assert mems == sorted(mems)
    assert prof.label == "java_inline"


def test_sweep_rejects_empty_and_unsorted():
    with pytest.raises(SweepError):
        sweep(KernelId.HorizontalSum, VariantId.Scalar, CallPathId.Inlined,
              [], FAST)
    with pytest.raises(SweepError):
        sweep(KernelId.HorizontalSum, VariantId.Scalar, CallPathId.Inlined,
              [WorkloadSize(64), WorkloadSize(32)], FAST)


def test_profile_validates_monotone_x():
    pt = SamplePoint(memory_per_invocation=512, flop_per_invocation=64,
                     best_mean_seconds=1e-6, performance=64e6,
                     inner_iters_used=1)
    with pytest.raises(ValueError):
        Profile(kernel=KernelId.HorizontalSum, variant=VariantId.Scalar,
                path=CallPathId.Inlined, alignment=AlignmentPolicy.Aligned32,
                points=[pt, pt])


def test_config_invariants():
    with pytest.raises(ValueError):
        MeasurementConfig(warmup_passes=0)
    with pytest.raises(ValueError):
        MeasurementConfig(outer_reps=2)
    with pytest.raises(ValueError):
        MeasurementConfig(min_inner_time=1e-5)


def test_label_grammar():
    assert label_for(CallPathId.Inlined, VariantId.Scalar) == "java_inline"
    assert label_for(CallPathId.Outlined, VariantId.ScalarOoo) == "java_ooo"
    assert label_for(CallPathId.CallbackPinned, VariantId.VectOoo) == "jni_vect_ooo"
    assert label_for(CallPathId.NativeMemoryDirect, VariantId.Vect) == "jni_native_vect"
    assert label_for(CallPathId.DynamicSymbol, VariantId.VectUnaligned) == "jni_dyn_vect_unalign"
    assert label_for(CallPathId.CallbackCopy, VariantId.Scalar) == "jni_copy"


def test_measure_point_repeatable():
    # consecutive measurements agree within 20% in at least 2 of 3 trials
    args = (KernelId.HorizontalSum, VariantId.Scalar, CallPathId.Inlined,
            WorkloadSize(2048))
    measure_point(*args, FAST)   # warm
    good = 0
    for _ in range(3):
        p1 = measure_point(*args, FAST).performance
        p2 = measure_point(*args, FAST).performance
        if abs(p1 - p2) / max(p1, p2) <= 0.20:
            good += 1
    assert good >= 2


def test_measurement_lock_refuses_concurrency():
    from kernelprof.harness import MeasurementBusyError, _measurement_lock

    acquired = _measurement_lock.acquire(blocking=False)
    assert acquired
    try:
        with pytest.raises(MeasurementBusyError):
            measure_point(KernelId.HorizontalSum, VariantId.Scalar,
                          CallPathId.Inlined, WorkloadSize(64), FAST)
    finally:
        _measurement_lock.release()


def test_sweep_rejects_non_uniform_sizes():
    with pytest.raises(SweepError):
        sweep(KernelId.HorizontalSum, VariantId.Scalar, CallPathId.Inlined,
              [WorkloadSize(24)], FAST)
