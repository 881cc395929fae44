"""Profile serialization: one CSV row per sample point.

Columns, in order: label, kernel, variant, callpath, alignment, n,
mem_bytes, flops, best_mean_seconds, gflops, inner_iters, rep_variance.
Floats are written with repr so write -> read reproduces every numeric
field exactly; gflops is derived display (performance is reconstructed
from flops / best_mean_seconds, which the sample-point invariant defines).
"""

from __future__ import annotations

import csv
import io
from pathlib import Path
from typing import Sequence

from ..boundary.paths import CallPathId
from ..harness import Profile, SamplePoint
from ..kernels.accounting import elements_for_memory
from ..kernels.ids import AlignmentPolicy, KernelId, VariantId

__all__ = ["write_csv", "read_csv", "CsvSchemaError", "COLUMNS"]

COLUMNS = ["label", "kernel", "variant", "callpath", "alignment", "n",
           "mem_bytes", "flops", "best_mean_seconds", "gflops",
           "inner_iters", "rep_variance"]


class CsvSchemaError(ValueError):
    pass


def _rows_for(profile: Profile):
    for pt in profile.points:
        n = int(round(elements_for_memory(profile.kernel,
                                          pt.memory_per_invocation)))
        yield [
            profile.label,
            profile.kernel.short,
            profile.variant.short,
            profile.path.short,
            profile.alignment.short,
            str(n),
            str(pt.memory_per_invocation),
            str(pt.flop_per_invocation),
            repr(pt.best_mean_seconds),
            repr(pt.performance / 1e9),
            str(pt.inner_iters_used),
            repr(pt.rep_variance),
        ]


def write_csv(profiles: Sequence[Profile], destination) -> None:
    """UTF-8, comma-separated, '.' decimal; row order = profile order then
    ascending memory; byte-stable for identical inputs."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    for profile in profiles:
        writer.writerows(_rows_for(profile))
    Path(destination).write_text(buf.getvalue(), encoding="utf-8")


def _parse_row(row: dict[str, str], lineno: int):
    def fail(msg):
        raise CsvSchemaError(f"line {lineno}: {msg}")

    try:
        kernel = KernelId.from_short(row["kernel"])
        variant = VariantId.from_short(row["variant"])
        path = CallPathId.from_short(row["callpath"])
        alignment = AlignmentPolicy.from_short(row["alignment"])
    except ValueError as exc:
        fail(str(exc))
    try:
        mem = int(row["mem_bytes"])
        flops = int(row["flops"])
        best = float(row["best_mean_seconds"])
        inner = int(row["inner_iters"])
        rep_var = float(row["rep_variance"])
        n = int(row["n"])
    except ValueError as exc:
        fail(f"bad numeric field: {exc}")
    if best <= 0:
        fail("best_mean_seconds must be positive")
    expected_n = int(round(elements_for_memory(kernel, mem)))
    if n != expected_n:
        fail(f"n={n} inconsistent with mem_bytes={mem} for {kernel.short} "
             f"(expected {expected_n})")
    point = SamplePoint(memory_per_invocation=mem, flop_per_invocation=flops,
                        best_mean_seconds=best, performance=flops / best,
                        inner_iters_used=inner, rep_variance=rep_var)
    key = (row["label"], kernel, variant, path, alignment)
    return key, point


def read_csv(source) -> list[Profile]:
    """Inverse of write_csv; rejects schema violations with line numbers."""
    text = Path(source).read_text(encoding="utf-8")
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise CsvSchemaError("line 1: empty file; header row is mandatory")
    if header != COLUMNS:
        missing = [c for c in COLUMNS if c not in header]
        extra = [c for c in header if c not in COLUMNS]
        detail = []
        if missing:
            detail.append(f"missing column(s): {', '.join(missing)}")
        if extra:
            detail.append(f"unknown column(s): {', '.join(extra)}")
        if not detail:
            detail.append("columns out of order")
        raise CsvSchemaError(f"line 1: {'; '.join(detail)}")

    profiles: list[Profile] = []
    current_key = None
    current_points: list[SamplePoint] = []
    current_line = 2

    def flush(lineno):
        nonlocal current_key, current_points
        if current_key is None:
            return
        label, kernel, variant, path, alignment = current_key
        try:
            profiles.append(Profile(kernel=kernel, variant=variant, path=path,
                                    alignment=alignment, points=current_points,
                                    label=label))
        except ValueError as exc:
            raise CsvSchemaError(
                f"line {lineno}: profile {label!r} invalid: {exc}") from exc
        current_key, current_points = None, []

    for lineno, row in enumerate(reader, 2):
        if not row:
            continue
        if len(row) != len(COLUMNS):
            raise CsvSchemaError(
                f"line {lineno}: expected {len(COLUMNS)} fields, got {len(row)}")
        key, point = _parse_row(dict(zip(COLUMNS, row)), lineno)
        if key != current_key:
            flush(lineno)
            current_key = key
            current_line = lineno
        current_points.append(point)
    flush(current_line)
    return profiles
