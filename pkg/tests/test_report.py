"""CSV round-trips, machine-profile files, chart determinism, summaries."""

import pytest

from kernelprof.boundary import CallPathId
from kernelprof.harness import Profile, SamplePoint
from kernelprof.kernels import AlignmentPolicy, KernelId, VariantId
from kernelprof.report import (COLUMNS, CsvSchemaError, MachineFileError,
                               read_csv, read_machine_profile,
                               reference_machine, render_profile_chart,
                               render_profile_figure, summarize_comparison,
                               write_csv, write_machine_profile)


def mk_profile(kernel=KernelId.HorizontalSum, path=CallPathId.Inlined,
               variant=VariantId.Scalar, mems=(256, 512, 1024),
               perfs=(1e9, 2e9, 3e9),
               alignment=AlignmentPolicy.Aligned32):
    points = []
    for m, perf in zip(mems, perfs):
        flop = m // 8 if kernel is KernelId.HorizontalSum else m // 16
        best = flop / perf
        points.append(SamplePoint(
            memory_per_invocation=m, flop_per_invocation=flop,
            best_mean_seconds=best, performance=flop / best,
            inner_iters_used=17, rep_variance=1.25e-9))
    return Profile(kernel=kernel, variant=variant, path=path,
                   alignment=alignment, points=points)


# -- CSV ----------------------------------------------------------------------

def test_write_read_round_trip(tmp_path):
    profiles = [mk_profile(),
                mk_profile(path=CallPathId.Outlined, perfs=(2e9, 1e9, 4e9)),
                mk_profile(kernel=KernelId.ArrayAddition,
                           variant=VariantId.ScalarOoo,
                           path=CallPathId.CallbackPinned)]
    dest = tmp_path / "out.csv"
    write_csv(profiles, dest)
    back = read_csv(dest)
    assert len(back) == len(profiles)
    for orig, got in zip(profiles, back):
        assert got.label == orig.label
        assert got.kernel is orig.kernel
        assert got.variant is orig.variant
        assert got.path is orig.path
        assert got.alignment is orig.alignment
        for p0, p1 in zip(orig.points, got.points):
            assert p1.memory_per_invocation == p0.memory_per_invocation
            assert p1.flop_per_invocation == p0.flop_per_invocation
            assert p1.best_mean_seconds == p0.best_mean_seconds
            assert p1.performance == p0.performance
            assert p1.inner_iters_used == p0.inner_iters_used
            assert p1.rep_variance == p0.rep_variance


def test_write_read_write_byte_stable(tmp_path):
    profiles = [mk_profile(perfs=(1.1e9, 2.3e9, 3.00007e9))]
    d1, d2 = tmp_path / "a.csv", tmp_path / "b.csv"
    write_csv(profiles, d1)
    write_csv(read_csv(d1), d2)
    assert d1.read_bytes() == d2.read_bytes()


def test_empty_profile_list_gives_header_only(tmp_path):
    dest = tmp_path / "empty.csv"
    write_csv([], dest)
    lines = dest.read_text().splitlines()
    assert lines == [",".join(COLUMNS)]


def test_three_points_gives_four_lines(tmp_path):
    dest = tmp_path / "p.csv"
    write_csv([mk_profile()], dest)
    assert len(dest.read_text().splitlines()) == 4


def test_missing_column_named(tmp_path):
    dest = tmp_path / "bad.csv"
    text = "\n".join([",".join(COLUMNS[:-1])])
    dest.write_text(text + "\n")
    with pytest.raises(CsvSchemaError) as err:
        read_csv(dest)
    assert "rep_variance" in str(err.value)
    assert "line 1" in str(err.value)


def test_out_of_order_mem_rejected(tmp_path):
    dest = tmp_path / "mono.csv"
    write_csv([mk_profile()], dest)
    lines = dest.read_text().splitlines()
    lines[1], lines[2] = lines[2], lines[1]
    dest.write_text("\n".join(lines) + "\n")
    with pytest.raises(CsvSchemaError) as err:
        read_csv(dest)
    assert "increasing" in str(err.value)


def test_bad_numeric_field_line_number(tmp_path):
    dest = tmp_path / "num.csv"
    write_csv([mk_profile()], dest)
    text = dest.read_text().replace("256", "not_a_number", 1)
    dest.write_text(text)
    with pytest.raises(CsvSchemaError) as err:
        read_csv(dest)
    assert "line 2" in str(err.value)


# -- machine profile files ------------------------------------------------------

def test_reference_machine_values():
    m = reference_machine()
    assert m.peak_performance == 41.6e9
    assert m.peak_bandwidth == 40e9
    assert m.cache_bytes(1) == 32 * 1024
    assert m.cache_bytes(2) == 256 * 1024
    assert m.cache_bytes(3) == 6 * 1024 * 1024


def test_repo_copy_matches_package_data():
    import kernelprof
    from pathlib import Path
    pkg_root = Path(kernelprof.__file__).resolve().parents[2]
    repo_copy = pkg_root / "machines" / "sandybridge-i5-2500.profile"
    if not repo_copy.exists():
        pytest.skip("repo-root machines/ copy not present")
    m = read_machine_profile(repo_copy)
    ref = reference_machine()
    assert m.peak_performance == ref.peak_performance
    assert m.peak_bandwidth == ref.peak_bandwidth
    assert m.cache_sizes == ref.cache_sizes


def test_machine_file_round_trip(tmp_path):
    ref = reference_machine()
    dest = tmp_path / "m.profile"
    write_machine_profile(ref, dest)
    back = read_machine_profile(dest)
    assert back.peak_performance == ref.peak_performance
    assert back.peak_bandwidth == ref.peak_bandwidth
    assert back.cache_sizes[0][1] == ref.cache_sizes[0][1]


def test_machine_file_rejects_unknown_key(tmp_path):
    dest = tmp_path / "m.profile"
    dest.write_text("peak_gflops = 1\nbogus = 2\n")
    with pytest.raises(MachineFileError) as err:
        read_machine_profile(dest)
    assert "bogus" in str(err.value)


def test_machine_file_requires_all_numeric_keys(tmp_path):
    dest = tmp_path / "m.profile"
    dest.write_text("peak_gflops = 1\npeak_bandwidth_gbs = 2\n")
    with pytest.raises(MachineFileError) as err:
        read_machine_profile(dest)
    assert "l1_bytes" in str(err.value)


# -- charts ---------------------------------------------------------------------

def test_chart_structure(tmp_path):
    ref = reference_machine()
    dest = tmp_path / "c.svg"
    render_profile_chart([mk_profile(mems=(256, 512), perfs=(1e9, 2e9))],
                         ref, dest)
    svg = dest.read_text()
    assert svg.count("<polyline") == 1
    assert svg.count('class="cache-marker"') == 3
    assert "java_inline" in svg


def test_chart_deterministic(tmp_path):
    ref = reference_machine()
    profiles = [mk_profile(), mk_profile(path=CallPathId.Outlined)]
    d1, d2 = tmp_path / "a.svg", tmp_path / "b.svg"
    render_profile_chart(profiles, ref, d1)
    render_profile_chart(profiles, ref, d2)
    assert d1.read_bytes() == d2.read_bytes()


def test_chart_requires_profiles(tmp_path):
    with pytest.raises(ValueError):
        render_profile_chart([], reference_machine(), tmp_path / "x.svg")


def test_figure_renders_png(tmp_path):
    dest = tmp_path / "f.png"
    render_profile_figure([mk_profile()], reference_machine(), dest)
    assert dest.stat().st_size > 1000
    assert dest.read_bytes()[:4] == b"\x89PNG"


# -- summaries --------------------------------------------------------------------

def test_summary_identical_pair_zero_delta():
    prof_in = mk_profile(path=CallPathId.Inlined)
    prof_out = mk_profile(path=CallPathId.Outlined)
    text = summarize_comparison([prof_in, prof_out], reference_machine())
    assert "mean delta over 3 points: +0.00%" in text


def test_summary_two_to_one_is_fifty_percent():
    fast = mk_profile(path=CallPathId.NativeMemoryDirect,
                      perfs=(2e9, 4e9, 6e9))
    slow = mk_profile(path=CallPathId.CallbackPinned, perfs=(1e9, 2e9, 3e9))
    text = summarize_comparison([fast, slow], reference_machine())
    assert "mean delta over 3 points: +50.00%" in text


def test_summary_header_shows_reference_machine():
    text = summarize_comparison([mk_profile()], reference_machine())
    assert "peak 41.6 Gflop/s" in text
    assert "bandwidth 40 GB/s" in text


def test_summary_rejects_mixed_kernels():
    with pytest.raises(ValueError):
        summarize_comparison([mk_profile(), mk_profile(kernel=KernelId.ArrayAddition)],
                             reference_machine())


def test_summary_notes_horner_accounting():
    prof = mk_profile(kernel=KernelId.HornerCoeff1st)
    text = summarize_comparison([prof], reference_machine())
    assert "192" in text
