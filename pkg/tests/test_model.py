"""Model math: intensity classification, decrease factor, fitting,
crossovers, and selection - each checked against an independent oracle."""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from kernelprof.boundary import CallPathId
from kernelprof.harness import Profile, SamplePoint
from kernelprof.kernels import AlignmentPolicy, KernelId, VariantId
from kernelprof.model import (Boundedness, CrossoverError, FitError,
                              MachineProfile, SelectionError, classify,
                              decrease_factor, best_implementation,
                              find_crossovers, fit_invocation_cost,
                              predicted_performance)

REF_MACHINE = MachineProfile(
    peak_performance=41.6e9, peak_bandwidth=40e9,
    cache_sizes=((1, 32 * 1024, "L1d"), (2, 256 * 1024, "L2"),
                 (3, 6 * 1024 * 1024, "L3")),
    description="reference")

_LABEL_COMBOS = [
    (CallPathId.Outlined, VariantId.Scalar),          # java
    (CallPathId.CallbackPinned, VariantId.Scalar),    # jni
    (CallPathId.Inlined, VariantId.Scalar),           # java_inline
    (CallPathId.NativeMemoryDirect, VariantId.Scalar),  # jni_native
    (CallPathId.Outlined, VariantId.ScalarOoo),       # java_ooo
    (CallPathId.CallbackPinned, VariantId.ScalarOoo),  # jni_ooo
]


def mk_profile(mems, perfs, combo=0):
    path, variant = _LABEL_COMBOS[combo]
    points = []
    for m, p in zip(mems, perfs):
        flop = int(m) // 8
        best = flop / p
        points.append(SamplePoint(memory_per_invocation=int(m),
                                  flop_per_invocation=flop,
                                  best_mean_seconds=best,
                                  performance=flop / best,
                                  inner_iters_used=1))
    return Profile(kernel=KernelId.HorizontalSum, variant=variant, path=path,
                   alignment=AlignmentPolicy.Aligned32, points=points)


def mk_fit_profile(flops, perfs):
    points = []
    mem = 8
    for f, p in zip(flops, perfs):
        best = f / p
        points.append(SamplePoint(memory_per_invocation=mem,
                                  flop_per_invocation=int(f),
                                  best_mean_seconds=best,
                                  performance=f / best,
                                  inner_iters_used=1))
        mem *= 2
    return Profile(kernel=KernelId.HorizontalSum, variant=VariantId.Scalar,
                   path=CallPathId.Inlined,
                   alignment=AlignmentPolicy.Aligned32, points=points)


# -- classification ----------------------------------------------------------

def test_classify_table_values():
    assert classify(Fraction(1, 16), REF_MACHINE) is Boundedness.MemoryBound
    assert classify(Fraction(1, 8), REF_MACHINE) is Boundedness.MemoryBound
    assert classify(12, REF_MACHINE) is Boundedness.CpuBound


def test_classify_boundary_is_cpu_bound():
    ai = Fraction(41.6e9) / Fraction(40e9)
    assert classify(ai, REF_MACHINE) is Boundedness.CpuBound


def test_classify_horner_at_100_points():
    ai = Fraction(19200, 2120)
    assert classify(ai, REF_MACHINE) is Boundedness.CpuBound


# -- decrease factor & predicted performance ---------------------------------

def test_decrease_factor_examples():
    assert decrease_factor(123.0, 0.0) == 1.0
    assert decrease_factor(7.0, 7.0) == 0.5
    assert decrease_factor(9.0, 1.0) == 0.9


def test_predicted_performance_examples():
    assert predicted_performance(10e9, 0.0, 123.0) == 10e9
    assert predicted_performance(10e9, 1000.0, 1000.0) == 5e9
    assert predicted_performance(10e9, 1000.0, 9000.0) == 9e9


def test_predicted_performance_errors():
    with pytest.raises(ValueError):
        predicted_performance(1e9, 0.0, 0.0)
    with pytest.raises(ValueError):
        decrease_factor(0.0, 1.0)


@given(st.floats(min_value=1e-3, max_value=1e9),
       st.floats(min_value=1e-3, max_value=1e9),
       st.floats(min_value=1e-3, max_value=1e9))
def test_df_strictly_increasing_in_flop(f1, f2, inv):
    # distinct F at a separation float64 can resolve against I
    lo, hi = sorted((f1, f2))
    if hi < lo * 1.01:
        return
    assert decrease_factor(lo, inv) < decrease_factor(hi, inv)


@given(st.floats(min_value=1e-3, max_value=1e12))
def test_df_at_equal_cost_is_half(inv):
    assert decrease_factor(inv, inv) == 0.5


@given(st.floats(min_value=1.0, max_value=1e6),
       st.floats(min_value=1e-3, max_value=1e6),
       st.floats(min_value=1e-3, max_value=1e6))
def test_predicted_monotone(p_max, inv, f):
    p_max *= 1e9
    p = predicted_performance(p_max, inv, f)
    assert p < p_max
    assert predicted_performance(p_max, inv, 2 * f) > p
    assert predicted_performance(p_max, 2 * inv, f) < p


# -- fitting ------------------------------------------------------------------

def _synthetic(p_max, inv_cost, n_points=8, lo=10.0, hi=1e8):
    flops = np.unique(np.round(np.logspace(math.log10(lo), math.log10(hi),
                                           n_points)).astype(np.int64))
    perfs = [p_max * f / (inv_cost + f) for f in flops]
    return flops, perfs


def test_fit_recovers_noiseless_parameters():
    rng = np.random.default_rng(0)
    for _ in range(20):
        p_max = rng.uniform(1e9, 50e9)
        inv = 10 ** rng.uniform(1, 6)
        flops, perfs = _synthetic(p_max, inv)
        fit = fit_invocation_cost(mk_fit_profile(flops, perfs))
        assert abs(fit.p_max - p_max) / p_max <= 0.01
        assert abs(fit.invocation_cost - inv) / inv <= 0.01
        assert fit.rms_relative_residual <= 1e-10


def test_fit_noisy_parameters():
    rng = np.random.default_rng(1)
    hits = 0
    for _ in range(20):
        p_max = rng.uniform(1e9, 50e9)
        inv = 10 ** rng.uniform(1, 6)
        flops, perfs = _synthetic(p_max, inv)
        noisy = [p * (1 + 0.02 * rng.standard_normal()) for p in perfs]
        fit = fit_invocation_cost(mk_fit_profile(flops, noisy))
        if (abs(fit.p_max - p_max) / p_max <= 0.10
                and abs(fit.invocation_cost - inv) / inv <= 0.10):
            hits += 1
    assert hits >= 18


def test_fit_constant_profile_gives_tiny_cost():
    flops, perfs = _synthetic(5e9, 0.0)
    fit = fit_invocation_cost(mk_fit_profile(flops, perfs))
    assert fit.invocation_cost <= 0.01 * min(flops)


def test_fit_requires_four_points():
    flops, perfs = _synthetic(5e9, 100.0, n_points=3)
    with pytest.raises(FitError):
        fit_invocation_cost(mk_fit_profile(flops[:3], perfs[:3]))


def test_fit_region_filter():
    flops, perfs = _synthetic(5e9, 1000.0)
    prof = mk_fit_profile(flops, perfs)
    mems = prof.mem_bytes
    with pytest.raises(FitError):
        fit_invocation_cost(prof, region=(mems[0], mems[1]))


# -- crossovers ---------------------------------------------------------------

def _oracle_crossovers(a, b):
    """Independent check: np.interp on the merged grid, transversal roots."""
    ax = np.log2([p.memory_per_invocation for p in a.points])
    ay = [p.performance for p in a.points]
    bx = np.log2([p.memory_per_invocation for p in b.points])
    by = [p.performance for p in b.points]
    lo, hi = max(ax[0], bx[0]), min(ax[-1], bx[-1])
    grid = sorted(set(x for x in np.concatenate([ax, bx]) if lo <= x <= hi)
                  | {lo, hi})
    d = [np.interp(x, ax, ay) - np.interp(x, bx, by) for x in grid]
    roots = []
    for i in range(len(grid) - 1):
        if d[i] == 0.0 and lo < grid[i] < hi:
            if i > 0 and d[i - 1] * d[i + 1] < 0:
                roots.append(2.0 ** grid[i])
        elif d[i] * d[i + 1] < 0:
            x = grid[i] + d[i] * (grid[i + 1] - grid[i]) / (d[i] - d[i + 1])
            roots.append(2.0 ** x)
    return roots


def test_crossover_analytic_case():
    mems = [2 ** k for k in range(6, 17)]   # grid contains 1000? use explicit
    mems = sorted(set(mems) | {1000})
    a = mk_profile(mems, [2e9] * len(mems), combo=0)
    b = mk_profile(mems, [4e9 * m / (1000 + m) for m in mems], combo=1)
    crossings = find_crossovers(a, b)
    assert len(crossings) == 1
    assert crossings[0].memory_at_crossover == pytest.approx(1000, rel=1e-9)
    assert crossings[0].winner_below == a.label
    assert crossings[0].winner_above == b.label


def test_crossover_identical_profiles_empty():
    mems = [256, 512, 1024]
    a = mk_profile(mems, [1e9, 2e9, 3e9], combo=0)
    b = mk_profile(mems, [1e9, 2e9, 3e9], combo=1)
    assert find_crossovers(a, b) == []


def test_crossover_dominated_profile_empty():
    mems = [256, 512, 1024]
    a = mk_profile(mems, [2e9, 3e9, 4e9], combo=0)
    b = mk_profile(mems, [1e9, 2e9, 3e9], combo=1)
    assert find_crossovers(a, b) == []


def test_crossover_tangent_is_not_a_crossing():
    mems = [256, 512, 1024]
    a = mk_profile(mems, [2e9, 1e9, 2e9], combo=0)
    b = mk_profile(mems, [1e9, 1e9, 1e9], combo=1)
    assert find_crossovers(a, b) == []


def test_crossover_no_overlap_errors():
    a = mk_profile([256, 512], [1e9, 1e9], combo=0)
    b = mk_profile([2048, 4096], [1e9, 1e9], combo=1)
    with pytest.raises(CrossoverError):
        find_crossovers(a, b)


def test_crossovers_match_bruteforce_oracle():
    rng = np.random.default_rng(42)
    for _ in range(50):
        na, nb = rng.integers(2, 9), rng.integers(2, 9)
        mems_a = sorted(rng.choice(2 ** np.arange(8, 24), na, replace=False))
        mems_b = sorted(rng.choice(2 ** np.arange(8, 24), nb, replace=False))
        a = mk_profile(mems_a, rng.uniform(1e9, 9e9, na), combo=0)
        b = mk_profile(mems_b, rng.uniform(1e9, 9e9, nb), combo=1)
        try:
            got = [c.memory_at_crossover for c in find_crossovers(a, b)]
        except CrossoverError:
            lo = max(mems_a[0], mems_b[0])
            hi = min(mems_a[-1], mems_b[-1])
            assert lo >= hi
            continue
        want = _oracle_crossovers(a, b)
        assert len(got) == len(want)
        for g, w in zip(got, want):
            assert g == pytest.approx(w, rel=1e-9)


# -- selection ----------------------------------------------------------------

def test_selection_single_profile():
    prof = mk_profile([256, 512, 1024], [1e9, 2e9, 3e9], combo=0)
    report = best_implementation([prof], (256, 1024))
    assert len(report.segments) == 1
    assert report.segments[0].winner == prof.label


def test_selection_analytic_crossover():
    mems = sorted(set(2 ** k for k in range(6, 17)) | {1000})
    a = mk_profile(mems, [2e9] * len(mems), combo=0)
    b = mk_profile(mems, [4e9 * m / (1000 + m) for m in mems], combo=1)
    report = best_implementation([a, b], (64, 64 * 1024))
    assert [s.winner for s in report.segments] == [a.label, b.label]
    assert report.segments[0].mem_hi == pytest.approx(1000, rel=1e-9)


def test_selection_tie_breaks_to_smallest_label():
    a = mk_profile([256, 1024], [1e9, 1e9], combo=0)   # java
    b = mk_profile([256, 1024], [1e9, 1e9], combo=1)   # jni
    report = best_implementation([a, b], (256, 1024))
    assert len(report.segments) == 1
    assert report.segments[0].winner == "java"


def test_selection_exclude_filter():
    a = mk_profile([256, 1024], [1e9, 1e9], combo=0)
    b = mk_profile([256, 1024], [9e9, 9e9], combo=3)   # jni_native
    report = best_implementation([a, b], (256, 1024), exclude=["jni_native*"])
    assert report.segments[0].winner == a.label


def test_selection_uncovered_range_errors():
    prof = mk_profile([256, 512], [1e9, 1e9], combo=0)
    with pytest.raises(SelectionError):
        best_implementation([prof], (256, 4096))


def test_selection_matches_pointwise_argmax():
    rng = np.random.default_rng(7)
    mems = 2 ** np.arange(8, 21)
    profiles = [mk_profile(mems, rng.uniform(1e9, 9e9, len(mems)), combo=c)
                for c in range(5)]
    lo, hi = 256, 2 ** 20
    report = best_implementation(profiles, (lo, hi))

    bounds = [s.mem_lo for s in report.segments] + [report.segments[-1].mem_hi]
    xs = np.logspace(math.log10(lo), math.log10(hi), 1000)
    for x in xs:
        if any(abs(math.log2(x) - math.log2(b)) < 1e-9 for b in bounds):
            continue
        vals = {}
        for p in profiles:
            px = np.log2([q.memory_per_invocation for q in p.points])
            py = [q.performance for q in p.points]
            vals[p.label] = np.interp(math.log2(x), px, py)
        best_label = min(sorted(vals), key=lambda k: (-vals[k], k))
        seg = next(s for s in report.segments if s.mem_lo <= x <= s.mem_hi)
        assert seg.winner == best_label, x
