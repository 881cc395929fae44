"""Measurement methodology: warm-up to steady state, adaptive inner
iteration counts, best mean over outer repetitions, and sweeps over
memory-per-invocation.

One point = the best (minimum) of `outer_reps` mean times, each mean taken
over an inner loop sized so a repetition spans at least `min_inner_time`.
The same buffers are reused across all inner iterations of a point, so the
memory system is in steady state; warm-up passes are never timed.
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass
from statistics import variance
from typing import Optional

from .boundary.library import NativeLibrary
from .boundary.paths import CallPathId, prepare
from .kernels.accounting import (elements_for_memory, flop_per_invocation,
                                 memory_per_invocation, min_sweep_n)
from .kernels.buffers import make_buffers
from .kernels.ids import AlignmentPolicy, KernelId, VariantId, WorkloadSize
from .labels import is_valid_label, label_for

__all__ = [
    "MeasurementConfig", "SamplePoint", "Profile", "SweepError",
    "MeasurementBusyError", "TimerResolutionError", "measure_point", "sweep",
    "geometric_sizes", "default_policy", "DEFAULT_SEED",
    "DEFAULT_MIN_BYTES", "DEFAULT_MAX_BYTES",
]

DEFAULT_SEED = 2024
DEFAULT_MIN_BYTES = 256
DEFAULT_MAX_BYTES = 64 << 20
_MAX_INNER_ITERS = 1 << 31

_TIMERS = {
    "perf_counter_ns": lambda: time.perf_counter_ns() * 1e-9,
    "monotonic_ns": lambda: time.monotonic_ns() * 1e-9,
}

_measurement_lock = threading.Lock()


class MeasurementBusyError(RuntimeError):
    pass


class TimerResolutionError(RuntimeError):
    pass


@dataclass(frozen=True)
class MeasurementConfig:
    warmup_passes: int = 2
    min_inner_time: float = 0.020   # seconds per repetition
    outer_reps: int = 3
    timer: str = "perf_counter_ns"

    def __post_init__(self):
        if self.warmup_passes < 1:
            raise ValueError("warmup_passes must be >= 1")
        if self.outer_reps < 3:
            raise ValueError("outer_reps must be >= 3")
        if self.min_inner_time < 1e-3:
            raise ValueError("min_inner_time must be >= 1 ms")
        if self.timer not in _TIMERS:
            raise ValueError(f"unknown timer {self.timer!r}; "
                             f"expected one of {sorted(_TIMERS)}")

    @property
    def clock(self):
        return _TIMERS[self.timer]


@dataclass(frozen=True)
class SamplePoint:
    memory_per_invocation: int
    flop_per_invocation: int
    best_mean_seconds: float
    performance: float              # flop/s = flop / best_mean_seconds
    inner_iters_used: int
    rep_means: tuple[float, ...] = ()
    rep_variance: float = 0.0

    def __post_init__(self):
        if self.rep_means and self.best_mean_seconds > min(self.rep_means):
            raise ValueError("best_mean_seconds exceeds a repetition mean")


@dataclass
class Profile:
    kernel: KernelId
    variant: VariantId
    path: CallPathId
    alignment: AlignmentPolicy
    points: list[SamplePoint]
    label: str = ""
    machine: Optional[object] = None
    partial: bool = False

    def __post_init__(self):
        if not self.label:
            self.label = label_for(self.path, self.variant)
        if not is_valid_label(self.label):
            raise ValueError(f"label {self.label!r} violates the label grammar")
        mems = [p.memory_per_invocation for p in self.points]
        if any(b <= a for a, b in zip(mems, mems[1:])):
            raise ValueError("points must be strictly increasing in "
                             "memory_per_invocation")

    @property
    def mem_bytes(self) -> list[int]:
        return [p.memory_per_invocation for p in self.points]

    @property
    def performances(self) -> list[float]:
        return [p.performance for p in self.points]


class SweepError(RuntimeError):
    def __init__(self, message: str, partial: Optional[Profile] = None):
        super().__init__(message)
        self.partial = partial


def default_policy(variant: VariantId) -> AlignmentPolicy:
    if variant is VariantId.VectUnaligned:
        return AlignmentPolicy.Misaligned8
    return AlignmentPolicy.Aligned32


def _calibrate(prepared, clock, min_inner_time: float) -> tuple[int, float]:
    """Grow the inner iteration count until one span >= min_inner_time."""
    prepared.run(1)   # prime: driver compilation and first-touch stay out
    iters = 1
    while True:
        t0 = clock()
        prepared.run(iters)
        span = clock() - t0
        if span >= min_inner_time:
            return iters, span
        if iters >= _MAX_INNER_ITERS:
            raise TimerResolutionError(
                f"span {span:.3g}s below min_inner_time at the inner "
                f"iteration cap {iters}")
        if span <= 0 or span < min_inner_time / 16:
            iters = min(iters * 16, _MAX_INNER_ITERS)
        else:
            goal = int(iters * min_inner_time / span * 1.25) + 1
            iters = min(max(goal, iters + 1), _MAX_INNER_ITERS)


def measure_point(kernel: KernelId, variant: VariantId, path: CallPathId,
                  size: WorkloadSize,
                  config: MeasurementConfig = MeasurementConfig(), *,
                  alignment: Optional[AlignmentPolicy] = None,
                  seed: int = DEFAULT_SEED,
                  library: Optional[NativeLibrary] = None,
                  target: str = "inprocess") -> SamplePoint:
    """Measure one (kernel, variant, path) at one workload size."""
    if not _measurement_lock.acquire(blocking=False):
        raise MeasurementBusyError("another measurement is in progress")
    try:
        policy = alignment or default_policy(variant)
        bufs = make_buffers(kernel, size, policy, seed)
        clock = config.clock
        prepared = prepare(path, kernel, variant, bufs,
                           library=library, target=target)
        with prepared:
            addresses = [bufs.buffers[r].address for r in bufs.roles]
            iters, _ = _calibrate(prepared, clock, config.min_inner_time)
            for _ in range(config.warmup_passes):
                prepared.run(iters)
            means = []
            for _ in range(config.outer_reps):
                t0 = clock()
                prepared.run(iters)
                means.append((clock() - t0) / iters)
            prepared.finish()
            assert addresses == [bufs.buffers[r].address for r in bufs.roles], \
                "buffer addresses moved during measurement"
        best = min(means)
        flop = flop_per_invocation(kernel, size)
        return SamplePoint(
            memory_per_invocation=memory_per_invocation(kernel, size),
            flop_per_invocation=flop,
            best_mean_seconds=best,
            performance=flop / best,
            inner_iters_used=iters,
            rep_means=tuple(means),
            rep_variance=variance(means) if len(means) > 1 else 0.0,
        )
    finally:
        _measurement_lock.release()


def sweep(kernel: KernelId, variant: VariantId, path: CallPathId,
          sizes: list[WorkloadSize],
          config: MeasurementConfig = MeasurementConfig(), *,
          alignment: Optional[AlignmentPolicy] = None,
          seed: int = DEFAULT_SEED,
          library: Optional[NativeLibrary] = None,
          target: str = "inprocess",
          machine=None) -> Profile:
    """Measure one point per size, ascending, with fresh seeded buffers."""
    if not sizes:
        raise SweepError("sizes must be nonempty")
    ns = [s.n for s in sizes]
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise SweepError("sizes must be strictly ascending")
    bad = [s.n for s in sizes if not s.sweep_valid]
    if bad:
        raise SweepError(f"sweep sizes must be multiples of 16, got {bad}")
    policy = alignment or default_policy(variant)
    points: list[SamplePoint] = []
    for size in sizes:
        try:
            points.append(measure_point(
                kernel, variant, path, size, config, alignment=policy,
                seed=seed, library=library, target=target))
        except Exception as exc:
            partial = Profile(kernel=kernel, variant=variant, path=path,
                              alignment=policy, points=points,
                              machine=machine, partial=True)
            raise SweepError(
                f"sweep aborted at n={size.n}: {exc}", partial) from exc
    return Profile(kernel=kernel, variant=variant, path=path,
                   alignment=policy, points=points, machine=machine)


def geometric_sizes(kernel: KernelId, min_bytes: int = DEFAULT_MIN_BYTES,
                    max_bytes: int = DEFAULT_MAX_BYTES,
                    factor: float = 2.0) -> list[WorkloadSize]:
    """Workload sizes whose memory-per-invocation is geometric between the
    bounds, rounded to the stride constraint and deduplicated."""
    if min_bytes > max_bytes:
        return []
    if factor <= 1.0:
        raise ValueError("factor must be > 1")
    floor_n = min_sweep_n(kernel)   # also the rounding grain: 32 keeps every
    sizes: list[WorkloadSize] = []  # Horner point valid for the 8-chain variant
    seen: set[int] = set()
    target = float(min_bytes)
    while target <= max_bytes * (1 + 1e-12):
        n_raw = elements_for_memory(kernel, target)
        n = max(floor_n, int(round(n_raw / floor_n)) * floor_n)
        if n not in seen:
            seen.add(n)
            sizes.append(WorkloadSize(n))
        target *= factor
    return sizes
