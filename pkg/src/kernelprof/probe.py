"""Machine probes: approximate peak bandwidth (streaming triad) and
approximate peak compute (independent fused multiply-add chains).

Probes are approximate by design; results carry a "measured" annotation.
No frequency pinning is attempted - values reflect the machine as found.
"""

from __future__ import annotations

import time
from pathlib import Path

import numpy as np
from numba import njit

from .model import MachineProfile

__all__ = ["probe_machine", "measure_bandwidth", "measure_peak",
           "cache_sizes_from_sysfs", "FALLBACK_CACHES"]

FALLBACK_CACHES = ((1, 32 * 1024, "L1d (assumed)"),
                   (2, 256 * 1024, "L2 (assumed)"),
                   (3, 8 * 1024 * 1024, "L3 (assumed)"))

_TRIAD_BYTES_PER_ELEMENT = 24   # read b, read c, write a


@njit(cache=True)
def _triad(a, b, c, s):
    for i in range(a.shape[0]):
        a[i] = b[i] + s * c[i]


@njit(fastmath=True, cache=True)
def _fma_chains(t, x0, r, s):
    # 8 independent chains x 4 lanes; fastmath lets LLVM fuse into FMA.
    # Operands arrive at runtime so the loop cannot constant-fold away.
    x00 = x0; x01 = x0; x02 = x0; x03 = x0
    x10 = x0; x11 = x0; x12 = x0; x13 = x0
    x20 = x0; x21 = x0; x22 = x0; x23 = x0
    x30 = x0; x31 = x0; x32 = x0; x33 = x0
    x40 = x0; x41 = x0; x42 = x0; x43 = x0
    x50 = x0; x51 = x0; x52 = x0; x53 = x0
    x60 = x0; x61 = x0; x62 = x0; x63 = x0
    x70 = x0; x71 = x0; x72 = x0; x73 = x0
    for _ in range(t):
        x00 = x00 * r + s; x01 = x01 * r + s; x02 = x02 * r + s; x03 = x03 * r + s
        x10 = x10 * r + s; x11 = x11 * r + s; x12 = x12 * r + s; x13 = x13 * r + s
        x20 = x20 * r + s; x21 = x21 * r + s; x22 = x22 * r + s; x23 = x23 * r + s
        x30 = x30 * r + s; x31 = x31 * r + s; x32 = x32 * r + s; x33 = x33 * r + s
        x40 = x40 * r + s; x41 = x41 * r + s; x42 = x42 * r + s; x43 = x43 * r + s
        x50 = x50 * r + s; x51 = x51 * r + s; x52 = x52 * r + s; x53 = x53 * r + s
        x60 = x60 * r + s; x61 = x61 * r + s; x62 = x62 * r + s; x63 = x63 * r + s
        x70 = x70 * r + s; x71 = x71 * r + s; x72 = x72 * r + s; x73 = x73 * r + s
    return (x00 + x01 + x02 + x03 + x10 + x11 + x12 + x13
            + x20 + x21 + x22 + x23 + x30 + x31 + x32 + x33
            + x40 + x41 + x42 + x43 + x50 + x51 + x52 + x53
            + x60 + x61 + x62 + x63 + x70 + x71 + x72 + x73)


@njit(cache=True)
def _mul_add_chains(t, x0, r, s):
    # same chains without fastmath: no fusion, mul and add issue separately
    x00 = x0; x01 = x0; x02 = x0; x03 = x0
    x10 = x0; x11 = x0; x12 = x0; x13 = x0
    x20 = x0; x21 = x0; x22 = x0; x23 = x0
    x30 = x0; x31 = x0; x32 = x0; x33 = x0
    x40 = x0; x41 = x0; x42 = x0; x43 = x0
    x50 = x0; x51 = x0; x52 = x0; x53 = x0
    x60 = x0; x61 = x0; x62 = x0; x63 = x0
    x70 = x0; x71 = x0; x72 = x0; x73 = x0
    for _ in range(t):
        x00 = x00 * r + s; x01 = x01 * r + s; x02 = x02 * r + s; x03 = x03 * r + s
        x10 = x10 * r + s; x11 = x11 * r + s; x12 = x12 * r + s; x13 = x13 * r + s
        x20 = x20 * r + s; x21 = x21 * r + s; x22 = x22 * r + s; x23 = x23 * r + s
        x30 = x30 * r + s; x31 = x31 * r + s; x32 = x32 * r + s; x33 = x33 * r + s
        x40 = x40 * r + s; x41 = x41 * r + s; x42 = x42 * r + s; x43 = x43 * r + s
        x50 = x50 * r + s; x51 = x51 * r + s; x52 = x52 * r + s; x53 = x53 * r + s
        x60 = x60 * r + s; x61 = x61 * r + s; x62 = x62 * r + s; x63 = x63 * r + s
        x70 = x70 * r + s; x71 = x71 * r + s; x72 = x72 * r + s; x73 = x73 * r + s
    return (x00 + x01 + x02 + x03 + x10 + x11 + x12 + x13
            + x20 + x21 + x22 + x23 + x30 + x31 + x32 + x33
            + x40 + x41 + x42 + x43 + x50 + x51 + x52 + x53
            + x60 + x61 + x62 + x63 + x70 + x71 + x72 + x73)


def cache_sizes_from_sysfs() -> tuple[tuple[int, int, str], ...]:
    """Data/unified cache sizes for cpu0, or documented fallbacks."""
    root = Path("/sys/devices/system/cpu/cpu0/cache")
    found: dict[int, int] = {}
    if root.is_dir():
        for index in sorted(root.glob("index*")):
            try:
                level = int((index / "level").read_text())
                ctype = (index / "type").read_text().strip()
                size_txt = (index / "size").read_text().strip()
            except (OSError, ValueError):
                continue
            if ctype not in ("Data", "Unified"):
                continue
            factor = 1
            if size_txt.endswith("K"):
                factor, size_txt = 1024, size_txt[:-1]
            elif size_txt.endswith("M"):
                factor, size_txt = 1024 * 1024, size_txt[:-1]
            try:
                found[level] = int(size_txt) * factor
            except ValueError:
                continue
    if all(lvl in found for lvl in (1, 2, 3)):
        return tuple((lvl, found[lvl], f"L{lvl} (sysfs)") for lvl in (1, 2, 3))
    return FALLBACK_CACHES


def _best_rate(fn, units_per_call: float, calls: tuple, reps: int,
               min_time: float) -> float:
    best = 0.0
    for _ in range(reps):
        t0 = time.perf_counter()
        fn(*calls)
        dt = time.perf_counter() - t0
        if dt > 0:
            best = max(best, units_per_call / dt)
    return best


def measure_bandwidth(largest_cache: int, reps: int = 5) -> float:
    """Streaming-triad bandwidth over a working set > 4x the largest cache."""
    n = max(4 * largest_cache // 8, 8 << 20)    # elements per array
    n = min(n, 32 << 20)
    a = np.zeros(n)
    b = np.ones(n)
    c = np.ones(n)
    _triad(a[:1024], b[:1024], c[:1024], 1.5)   # compile + touch
    return _best_rate(_triad, _TRIAD_BYTES_PER_ELEMENT * n, (a, b, c, 1.5),
                      reps, 0.05)


def measure_peak(reps: int = 5, chain_iters: int = 4_000_000
                 ) -> tuple[float, float]:
    """(FMA peak, no-FMA peak) in flop/s; 2 flops per lane-op when fused."""
    args = (chain_iters, 1.0, 0.999999, 1e-6)
    _fma_chains(10, *args[1:])
    _mul_add_chains(10, *args[1:])
    flops = 2.0 * 32 * chain_iters
    fma = _best_rate(_fma_chains, flops, args, reps, 0.05)
    plain = _best_rate(_mul_add_chains, flops, args, reps, 0.05)
    return fma, plain


def probe_machine(reps: int = 5) -> MachineProfile:
    caches = cache_sizes_from_sysfs()
    beta = measure_bandwidth(caches[-1][1], reps)
    pi_fma, pi_plain = measure_peak(reps)
    desc = (f"measured: triad bandwidth and FMA-chain peak "
            f"(non-FMA peak {pi_plain / 1e9:.1f} Gflop/s); "
            f"caches {'sysfs' if 'sysfs' in caches[0][2] else 'assumed'}")
    return MachineProfile(peak_performance=pi_fma, peak_bandwidth=beta,
                          cache_sizes=caches, description=desc)
