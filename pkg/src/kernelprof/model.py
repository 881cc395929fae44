"""Analytical models over measured profiles.

Arithmetic intensity and the roofline test decide whether a kernel is
bandwidth- or compute-limited; the invocation-cost model

    P(F) = p_max * F / (I + F)

explains the small-workload falloff, with I the per-call overhead in
equivalent flops and DF = F/(I+F) the fraction of peak retained. Fitting
recovers (p_max, I) from measured points; crossover detection and
selection locate the most efficient implementation per memory range.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .harness import Profile

__all__ = [
    "MachineProfile", "FitResult", "Crossover", "SelectionReport",
    "SelectionSegment", "Boundedness", "arithmetic_intensity", "classify",
    "predicted_performance", "decrease_factor", "fit_invocation_cost",
    "find_crossovers", "best_implementation", "FitError", "CrossoverError",
    "SelectionError", "interpolate_performance",
]


class Boundedness(enum.Enum):
    MemoryBound = "memory-bound"
    CpuBound = "cpu-bound"


class FitError(ValueError):
    pass


class CrossoverError(ValueError):
    pass


class SelectionError(ValueError):
    pass


@dataclass(frozen=True)
class MachineProfile:
    """Peak compute, peak bandwidth, and the cache hierarchy of one host."""

    peak_performance: float          # flop/s
    peak_bandwidth: float            # byte/s
    cache_sizes: tuple[tuple[int, int, str], ...]   # (level, bytes, note)
    description: str = ""

    def __post_init__(self):
        if self.peak_performance <= 0 or self.peak_bandwidth <= 0:
            raise ValueError("peak performance and bandwidth must be positive")
        sizes = [b for _, b, _ in self.cache_sizes]
        if any(b2 <= b1 for b1, b2 in zip(sizes, sizes[1:])):
            raise ValueError("cache sizes must be strictly increasing by level")

    def cache_bytes(self, level: int) -> int:
        for lvl, size, _ in self.cache_sizes:
            if lvl == level:
                return size
        raise KeyError(f"no cache level {level}")


@dataclass(frozen=True)
class FitResult:
    p_max: float                     # flop/s
    invocation_cost: float           # flop
    rms_relative_residual: float
    points_used: int

    def __post_init__(self):
        if self.p_max <= 0 or self.invocation_cost < 0:
            raise ValueError("p_max must be > 0 and invocation cost >= 0")


@dataclass(frozen=True)
class Crossover:
    memory_at_crossover: float       # bytes
    winner_below: str                # profile label
    winner_above: str


@dataclass(frozen=True)
class SelectionSegment:
    mem_lo: float
    mem_hi: float
    winner: str
    margin: float                    # relative margin over the runner-up


@dataclass(frozen=True)
class SelectionReport:
    mem_lo: float
    mem_hi: float
    segments: tuple[SelectionSegment, ...]


# ---------------------------------------------------------------------------
# arithmetic intensity and the roofline test
# ---------------------------------------------------------------------------

def arithmetic_intensity(flop: int, mem_bytes: int) -> Fraction:
    """flop/byte as an exact rational; flop == AI * mem holds exactly."""
    if mem_bytes <= 0:
        raise ValueError("memory-per-invocation must be positive")
    return Fraction(flop, mem_bytes)


def classify(ai, machine: MachineProfile) -> Boundedness:
    """Memory-bound iff peak compute strictly exceeds AI x peak bandwidth."""
    ai = Fraction(ai)
    pi = Fraction(machine.peak_performance)
    beta = Fraction(machine.peak_bandwidth)
    return Boundedness.MemoryBound if pi > ai * beta else Boundedness.CpuBound


# ---------------------------------------------------------------------------
# invocation-cost model and decrease factor
# ---------------------------------------------------------------------------

def predicted_performance(p_max: float, invocation_cost: float,
                          flop: float) -> float:
    if flop < 0 or invocation_cost < 0:
        raise ValueError("flop and invocation cost must be nonnegative")
    if flop == 0 and invocation_cost == 0:
        raise ValueError("flop and invocation cost cannot both be zero")
    return p_max * flop / (invocation_cost + flop)


def decrease_factor(flop: float, invocation_cost: float) -> float:
    """Fraction of peak retained at a given flop-per-invocation, in (0, 1]."""
    if flop <= 0:
        raise ValueError("flop-per-invocation must be positive")
    if invocation_cost < 0:
        raise ValueError("invocation cost must be nonnegative")
    return flop / (invocation_cost + flop)


# ---------------------------------------------------------------------------
# Fitting (p_max, I) to measured (F, P) pairs
# ---------------------------------------------------------------------------

def _fit_pairs(flops: Sequence[float], perfs: Sequence[float]) -> FitResult:
    m = len(flops)
    p_max = max(perfs)
    # I0: F of the point whose performance is nearest p_max/2
    half = p_max / 2.0
    i0 = min(range(m), key=lambda i: abs(perfs[i] - half))
    inv_cost = max(flops[i0], 1e-12)

    def residuals(pm, ic):
        return [(pm * f / (ic + f) - p) / p for f, p in zip(flops, perfs)]

    def sq(res):
        return sum(r * r for r in res)

    best_sq = sq(residuals(p_max, inv_cost))
    for _ in range(50):
        # Gauss-Newton step on relative residuals
        g11 = g12 = g22 = b1 = b2 = 0.0
        for f, p in zip(flops, perfs):
            g = f / (inv_cost + f)
            r = (p_max * g - p) / p
            j1 = g / p
            j2 = -p_max * f / ((inv_cost + f) ** 2 * p)
            g11 += j1 * j1
            g12 += j1 * j2
            g22 += j2 * j2
            b1 += j1 * r
            b2 += j2 * r
        det = g11 * g22 - g12 * g12
        if det == 0 or not math.isfinite(det):
            break
        dp = (g22 * b1 - g12 * b2) / det
        di = (g11 * b2 - g12 * b1) / det
        # halve the step until the residual norm does not regress
        scale = 1.0
        stepped = False
        for _ in range(30):
            pm_new = p_max - scale * dp
            ic_new = max(inv_cost - scale * di, 0.0)
            if pm_new > 0:
                new_sq = sq(residuals(pm_new, ic_new))
                if new_sq <= best_sq:
                    rel_step = max(abs(pm_new - p_max) / p_max,
                                   abs(ic_new - inv_cost) / max(inv_cost, 1.0))
                    p_max, inv_cost, best_sq = pm_new, ic_new, new_sq
                    stepped = True
                    break
            scale /= 2.0
        if not stepped or rel_step < 1e-12:
            break

    rms = math.sqrt(best_sq / m)
    return FitResult(p_max=p_max, invocation_cost=inv_cost,
                     rms_relative_residual=rms, points_used=m)


def fit_invocation_cost(profile: Profile,
                        region: Optional[tuple[float, float]] = None
                        ) -> FitResult:
    """Least-squares fit of (p_max, I) to a profile's (F, P) points,
    minimizing relative residuals; deterministic for given points.

    `region` optionally restricts the points to a memory-per-invocation
    range [lo, hi].
    """
    pts = profile.points
    if region is not None:
        lo, hi = region
        pts = [p for p in pts
               if lo <= p.memory_per_invocation <= hi]
    if len(pts) < 4:
        raise FitError(f"need at least 4 points in region, have {len(pts)}")
    flops = [float(p.flop_per_invocation) for p in pts]
    if len(set(flops)) == 1:
        raise FitError("degenerate fit: all points share one flop count")
    perfs = [p.performance for p in pts]
    return _fit_pairs(flops, perfs)


# ---------------------------------------------------------------------------
# Crossovers and selection over piecewise-linear interpolants
# ---------------------------------------------------------------------------
# Interpolation runs in (log2 memory, linear performance) space.

def _knots(profile: Profile) -> tuple[list[float], list[float]]:
    xs = [math.log2(p.memory_per_invocation) for p in profile.points]
    ys = [p.performance for p in profile.points]
    return xs, ys


def _interp(xs: list[float], ys: list[float], x: float) -> float:
    if x <= xs[0]:
        return ys[0]
    if x >= xs[-1]:
        return ys[-1]
    for i in range(len(xs) - 1):
        if xs[i] <= x <= xs[i + 1]:
            t = (x - xs[i]) / (xs[i + 1] - xs[i])
            return ys[i] + t * (ys[i + 1] - ys[i])
    raise AssertionError("unreachable")


def interpolate_performance(profile: Profile, mem_bytes: float) -> float:
    """Interpolated performance at a memory-per-invocation (log2-x space)."""
    xs, ys = _knots(profile)
    x = math.log2(mem_bytes)
    if not xs[0] - 1e-12 <= x <= xs[-1] + 1e-12:
        raise ValueError(f"{mem_bytes} bytes outside profile range")
    return _interp(xs, ys, x)


def find_crossovers(a: Profile, b: Profile) -> list[Crossover]:
    """Strict order changes of the two interpolants, ordered by memory.

    A crossing is reported where the sign of (a - b) differs on adjacent
    grid intervals; tangent points without an order change are not
    crossings.
    """
    if len(a.points) < 2 or len(b.points) < 2:
        raise CrossoverError("each profile needs at least 2 points")
    ax, ay = _knots(a)
    bx, by = _knots(b)
    lo, hi = max(ax[0], bx[0]), min(ax[-1], bx[-1])
    if lo >= hi:
        raise CrossoverError("profiles do not overlap in memory range")

    grid = sorted({x for x in ax + bx if lo <= x <= hi} | {lo, hi})
    diffs = [_interp(ax, ay, x) - _interp(bx, by, x) for x in grid]

    # Sign per interval: the difference is linear inside each one.
    out: list[Crossover] = []

    def seg_sign(i: int) -> int:
        d0, d1 = diffs[i], diffs[i + 1]
        if d0 == 0.0 and d1 == 0.0:
            return 0
        if d0 >= 0 and d1 >= 0:
            return 1
        if d0 <= 0 and d1 <= 0:
            return -1
        return 2  # strict sign change inside the interval

    prev_sign = 0
    for i in range(len(grid) - 1):
        s = seg_sign(i)
        if s == 2:
            d0, d1 = diffs[i], diffs[i + 1]
            x_star = grid[i] + d0 * (grid[i + 1] - grid[i]) / (d0 - d1)
            below, above = (a, b) if d0 > 0 else (b, a)
            out.append(Crossover(memory_at_crossover=2.0 ** x_star,
                                 winner_below=below.label,
                                 winner_above=above.label))
            prev_sign = 1 if d1 > 0 else -1
        elif s != 0:
            if prev_sign != 0 and s != prev_sign:
                # order flipped across a shared knot (or a zero run);
                # report the point where the new order takes hold
                below, above = (a, b) if prev_sign > 0 else (b, a)
                out.append(Crossover(memory_at_crossover=2.0 ** grid[i],
                                     winner_below=below.label,
                                     winner_above=above.label))
            prev_sign = s
    return out


def _label_sort_key(profile: Profile) -> tuple[str, str, str]:
    return (profile.label, profile.path.short, profile.variant.short)


def best_implementation(profiles: Sequence[Profile],
                        mem_range: tuple[float, float],
                        exclude: Sequence[str] = ()) -> SelectionReport:
    """Per-segment winner by interpolated performance over a memory range.

    Profiles whose labels match an entry in `exclude` (exact or fnmatch
    pattern) are ineligible. Ties break to the lexicographically smallest
    label. Segments partition the range; adjacent segments have distinct
    winners.
    """
    import fnmatch

    lo_b, hi_b = mem_range
    if lo_b <= 0 or hi_b <= lo_b:
        raise SelectionError("memory range must satisfy 0 < lo < hi")
    eligible = [p for p in profiles
                if not any(fnmatch.fnmatch(p.label, pat) for pat in exclude)]
    if not eligible:
        raise SelectionError("no eligible profiles")
    eligible = sorted(eligible, key=_label_sort_key)

    lo, hi = math.log2(lo_b), math.log2(hi_b)

    # Event grid: range ends, every knot inside, every pairwise crossover.
    events = {lo, hi}
    for p in eligible:
        events.update(x for x in _knots(p)[0] if lo < x < hi)
    for i in range(len(eligible)):
        for j in range(i + 1, len(eligible)):
            try:
                for c in find_crossovers(eligible[i], eligible[j]):
                    x = math.log2(c.memory_at_crossover)
                    if lo < x < hi:
                        events.add(x)
            except CrossoverError:
                continue
    grid = sorted(events)

    def covering(x: float) -> list[Profile]:
        out = []
        for p in eligible:
            xs, _ = _knots(p)
            if xs[0] - 1e-12 <= x <= xs[-1] + 1e-12:
                out.append(p)
        return out

    raw: list[tuple[float, float, str, float]] = []
    for x0, x1 in zip(grid, grid[1:]):
        xm = 0.5 * (x0 + x1)
        cands = covering(xm)
        if not cands:
            raise SelectionError(
                f"range around {2 ** xm:.0f} bytes uncovered by all profiles")
        scored = sorted(((-_interp(*_knots(p), xm), p.label) for p in cands))
        best_perf, best_label = -scored[0][0], scored[0][1]
        if len(scored) > 1:
            runner = -scored[1][0]
            margin = (best_perf - runner) / runner if runner > 0 else math.inf
        else:
            margin = math.inf
        raw.append((x0, x1, best_label, margin))

    merged: list[SelectionSegment] = []
    for x0, x1, label, margin in raw:
        if merged and merged[-1].winner == label:
            prev = merged[-1]
            merged[-1] = SelectionSegment(prev.mem_lo, 2.0 ** x1, label,
                                          min(prev.margin, margin))
        else:
            merged.append(SelectionSegment(2.0 ** x0, 2.0 ** x1, label, margin))
    return SelectionReport(mem_lo=lo_b, mem_hi=hi_b, segments=tuple(merged))
