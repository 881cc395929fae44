"""Command-line driver: list, bench, sweep, fit, compare, probe, reproduce.

Exit codes: 0 success, 1 usage error, 2 measurement/environment error.
Every run that writes outputs also writes a JSON metadata sidecar with the
full configuration for reproducibility.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import __version__
from .boundary import (CallPathId, LibraryLoadError, default_library_path,
                       load_native_library)
from .harness import (DEFAULT_MAX_BYTES, DEFAULT_MIN_BYTES, DEFAULT_SEED,
                      MeasurementConfig, SweepError, geometric_sizes,
                      measure_point, sweep)
from .kernels import (AlignmentPolicy, AlignmentMismatchError, KernelId,
                      StrideError, VariantId, VariantUnavailableError,
                      WorkloadSize, check_alignment, host_vector_bits,
                      list_variants)
from .model import (FitError, SelectionError, best_implementation,
                    find_crossovers, fit_invocation_cost, CrossoverError)
from .probe import probe_machine
from .report import (read_csv, read_machine_profile, reference_machine,
                     render_profile_chart, render_profile_figure,
                     summarize_comparison, write_csv, write_machine_profile)

EXIT_OK, EXIT_USAGE, EXIT_ENV = 0, 1, 2


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _usage(msg: str) -> CliError:
    return CliError(msg, EXIT_USAGE)


def _env(msg: str) -> CliError:
    return CliError(msg, EXIT_ENV)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_bytes(text: str) -> int:
    """Byte counts with optional binary suffix: 64, 2k, 16M, 1G."""
    t = text.strip().lower()
    factor = 1
    if t and t[-1] in "kmg":
        factor = {"k": 1 << 10, "m": 1 << 20, "g": 1 << 30}[t[-1]]
        t = t[:-1]
    try:
        return int(float(t) * factor)
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse byte count {text!r}")


def parse_range(text: str) -> tuple[int, int]:
    if ":" not in text:
        raise argparse.ArgumentTypeError("range must look like LO:HI")
    lo, _, hi = text.partition(":")
    return parse_bytes(lo), parse_bytes(hi)


def _load_machine(spec: str | None):
    if not spec or spec == "reference":
        return reference_machine()
    path = Path(spec)
    if not path.exists():
        raise _usage(f"machine profile not found: {spec}")
    return read_machine_profile(path)


def _library_or_none(required: bool):
    path = default_library_path()
    if path is None:
        if required:
            raise _env("native library not found; build native/ or set "
                       "KERNELPROF_NATIVE_LIB")
        return None
    try:
        return load_native_library(path)
    except LibraryLoadError as exc:
        if required:
            raise _env(str(exc))
        print(f"notice: {exc}", file=sys.stderr)
        return None


def _config(args) -> MeasurementConfig:
    return MeasurementConfig(min_inner_time=args.min_inner_ms / 1e3,
                             outer_reps=args.reps,
                             warmup_passes=args.warmup)


def _write_metadata(dest: Path, args, extra=None) -> None:
    meta = {
        "tool": "kernelprof",
        "version": __version__,
        "argv": sys.argv[1:],
        "config": {k: v for k, v in sorted(vars(args).items())
                   if k != "func" and not callable(v)},
        "recorded_at": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
    }
    if extra:
        meta.update(extra)
    dest.write_text(json.dumps(meta, indent=2, default=str) + "\n",
                    encoding="utf-8")


def _measure_args(p, with_size=True):
    p.add_argument("--kernel", required=True, choices=[k.short for k in KernelId])
    p.add_argument("--variant", default="scalar",
                   choices=[v.short for v in VariantId])
    p.add_argument("--path", default="inlined",
                   choices=[c.short for c in CallPathId])
    p.add_argument("--align", default=None,
                   choices=[a.short for a in AlignmentPolicy],
                   help="buffer alignment policy (defaults to the variant's)")
    p.add_argument("--target", default="inprocess",
                   choices=["inprocess", "native"],
                   help="whose kernel code pointer-based paths call")
    p.add_argument("--reps", type=int, default=3)
    p.add_argument("--warmup", type=int, default=2)
    p.add_argument("--min-inner-ms", type=float, default=20.0)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)


def _resolve_measure(args):
    kernel = KernelId.from_short(args.kernel)
    variant = VariantId.from_short(args.variant)
    path = CallPathId.from_short(args.path)
    align = AlignmentPolicy.from_short(args.align) if args.align else None
    reason = list_variants(kernel)[variant]
    if reason is not None:
        raise _usage(f"{kernel.short}/{variant.short} unavailable: {reason}")
    if align is not None:
        try:
            check_alignment(variant, align)
        except AlignmentMismatchError as exc:
            raise _usage(str(exc))
    library = None
    if path is CallPathId.DynamicSymbol or args.target == "native":
        library = _library_or_none(required=True)
    return kernel, variant, path, align, library


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_list(args) -> int:
    print(f"host vector width: {host_vector_bits()} bits")
    lib_path = default_library_path()
    library = None
    lib_note = "not found (set KERNELPROF_NATIVE_LIB or build native/)"
    if lib_path is not None:
        try:
            library = load_native_library(lib_path)
            lib_note = (f"{lib_path} (vectorized: "
                        f"{'yes' if library.has_vect else 'no'})")
        except LibraryLoadError as exc:
            lib_note = f"unusable: {exc}"
    print(f"native library: {lib_note}")
    print()
    print("kernels and variants:")
    for kernel in KernelId:
        print(f"  {kernel.short}")
        for variant, reason in list_variants(kernel).items():
            status = "available" if reason is None else f"unavailable: {reason}"
            print(f"    {variant.short:<14s} {status}")
    print()
    print("call paths:")
    for path in CallPathId:
        if path is CallPathId.DynamicSymbol and library is None:
            status = "unavailable: native library not loaded"
        else:
            status = "available"
        print(f"  {path.short:<16s} {status}")
    return EXIT_OK


def cmd_bench(args) -> int:
    kernel, variant, path, align, library = _resolve_measure(args)
    if args.n is not None:
        size = WorkloadSize(args.n)
    else:
        sizes = geometric_sizes(kernel, args.bytes, args.bytes, 2.0)
        if not sizes:
            raise _usage(f"no valid workload size for {args.bytes} bytes")
        size = sizes[0]
    pt = measure_point(kernel, variant, path, size, _config(args),
                       alignment=align, seed=args.seed, library=library,
                       target=args.target)
    print(f"kernel = {kernel.short}")
    print(f"variant = {variant.short}")
    print(f"callpath = {path.short}")
    print(f"n = {size.n}")
    print(f"mem_bytes = {pt.memory_per_invocation}")
    print(f"flops = {pt.flop_per_invocation}")
    print(f"best_mean_seconds = {pt.best_mean_seconds!r}")
    print(f"gflops = {pt.performance / 1e9!r}")
    print(f"inner_iters = {pt.inner_iters_used}")
    print(f"rep_variance = {pt.rep_variance!r}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    kernel, variant, path, align, library = _resolve_measure(args)
    machine = _load_machine(args.machine)
    sizes = geometric_sizes(kernel, args.min_bytes, args.max_bytes, args.factor)
    if not sizes:
        raise _usage("size constraints are unsatisfiable")
    try:
        profile = sweep(kernel, variant, path, sizes, _config(args),
                        alignment=align, seed=args.seed, library=library,
                        target=args.target, machine=machine)
    except (AlignmentMismatchError, StrideError, VariantUnavailableError) as exc:
        raise _usage(str(exc))
    except SweepError as exc:
        raise _env(str(exc))
    out = Path(args.out)
    write_csv([profile], out)
    render_profile_chart([profile], machine, out.with_suffix(".svg"))
    render_profile_figure([profile], machine, out.with_suffix(".png"))
    _write_metadata(out.with_suffix(".meta.json"), args)
    print(f"wrote {out} ({len(profile.points)} points), "
          f"{out.with_suffix('.svg')}, {out.with_suffix('.png')}")
    return EXIT_OK


def cmd_fit(args) -> int:
    profiles = read_csv(args.csv)
    matches = [p for p in profiles if p.label == args.label]
    if args.path:
        matches = [p for p in matches if p.path.short == args.path]
    if args.align:
        matches = [p for p in matches if p.alignment.short == args.align]
    if not matches:
        known = sorted({p.label for p in profiles})
        raise _usage(f"label {args.label!r} not in {args.csv} "
                     f"(available: {', '.join(known)})")
    if len(matches) > 1:
        detail = ", ".join(f"{p.label}[{p.path.short}/{p.alignment.short}]"
                           for p in matches)
        raise _usage(f"label {args.label!r} is ambiguous ({detail}); "
                     f"add --path/--align")
    try:
        fit = fit_invocation_cost(matches[0], region=args.region)
    except FitError as exc:
        raise _usage(str(exc))
    print(f"label = {args.label}")
    print(f"p_max_gflops = {fit.p_max / 1e9!r}")
    print(f"invocation_cost_flop = {fit.invocation_cost!r}")
    print(f"rms_relative_residual = {fit.rms_relative_residual!r}")
    print(f"points_used = {fit.points_used}")
    print("note = measurement-loop overhead is folded into the invocation cost")
    return EXIT_OK


def cmd_compare(args) -> int:
    profiles = []
    for source in args.csv:
        profiles.extend(read_csv(source))
    if len(profiles) < 2:
        raise _usage("compare needs at least 2 profiles")
    labels = [p.label for p in profiles]
    dupes = sorted({l for l in labels if labels.count(l) > 1})
    if dupes:
        raise _usage(f"duplicate labels across inputs: {', '.join(dupes)}; "
                     f"use --exclude or separate runs")
    lo, hi = args.range
    try:
        report = best_implementation(profiles, (lo, hi), exclude=args.exclude)
    except SelectionError as exc:
        raise _usage(str(exc))
    print(f"range: {lo} .. {hi} bytes")
    for seg in report.segments:
        margin = ("n/a" if seg.margin == float("inf")
                  else f"{100 * seg.margin:.1f}%")
        print(f"  [{seg.mem_lo:14.1f} B .. {seg.mem_hi:14.1f} B]  "
              f"best: {seg.winner:<24s} margin over runner-up: {margin}")
    print("crossovers:")
    eligible = [p for p in profiles]
    any_cross = False
    for i in range(len(eligible)):
        for j in range(i + 1, len(eligible)):
            try:
                crossings = find_crossovers(eligible[i], eligible[j])
            except CrossoverError:
                continue
            for c in crossings:
                any_cross = True
                print(f"  {c.memory_at_crossover:14.1f} B: "
                      f"{c.winner_below} -> {c.winner_above}")
    if not any_cross:
        print("  none")
    return EXIT_OK


def cmd_probe(args) -> int:
    try:
        machine = probe_machine(reps=args.reps)
    except MemoryError as exc:
        raise _env(f"probe allocation failed: {exc}")
    out = Path(args.machine_out)
    write_machine_profile(machine, out)
    check = read_machine_profile(out)
    assert check.peak_performance == machine.peak_performance
    print(f"peak_gflops = {machine.peak_performance / 1e9!r}")
    print(f"peak_bandwidth_gbs = {machine.peak_bandwidth / 1e9!r}")
    for lvl, size, note in machine.cache_sizes:
        print(f"l{lvl}_bytes = {size}")
    print(f"description = {machine.description}")
    print(f"wrote {out}")
    return EXIT_OK


def _reproduce_matrix(library):
    java_paths = [CallPathId.Inlined, CallPathId.Outlined]
    jni_paths = [CallPathId.DynamicSymbol, CallPathId.CallbackPinned,
                 CallPathId.CallbackCopy, CallPathId.NativeMemoryDirect]
    for path in java_paths:
        yield path, "inprocess"
    if library is not None:
        for path in jni_paths:
            yield path, "native"


def cmd_reproduce(args) -> int:
    machine = _load_machine(args.machine)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    library = _library_or_none(required=False)
    notices: list[str] = []
    if library is None:
        notices.append("native library unavailable: jni-family curves skipped")

    kernels = ([KernelId.from_short(k) for k in args.kernels.split(",")]
               if args.kernels else list(KernelId))
    config = _config(args)
    failures = 0
    for kernel in kernels:
        profiles = []
        sizes = geometric_sizes(kernel, args.min_bytes, args.max_bytes,
                                args.factor)
        avail = list_variants(kernel)
        for path, target in _reproduce_matrix(library):
            for variant in VariantId:
                if avail[variant] is not None:
                    continue
                try:
                    profiles.append(sweep(
                        kernel, variant, path, sizes, config, seed=args.seed,
                        library=library, target=target, machine=machine))
                except Exception as exc:
                    failures += 1
                    notices.append(f"{kernel.short} {path.short} "
                                   f"{variant.short}: {exc}")
        if not profiles:
            continue
        base = out_dir / kernel.short
        write_csv(profiles, base.with_suffix(".csv"))
        render_profile_chart(profiles, machine, base.with_suffix(".svg"))
        render_profile_figure(profiles, machine, base.with_suffix(".png"))
        (out_dir / f"{kernel.short}_summary.txt").write_text(
            summarize_comparison(profiles, machine), encoding="utf-8")
        print(f"{kernel.short}: {len(profiles)} profiles x "
              f"{len(sizes)} points")
    _write_metadata(out_dir / "run_metadata.json", args,
                    {"notices": notices, "failures": failures})
    if notices:
        (out_dir / "notices.txt").write_text("\n".join(notices) + "\n",
                                             encoding="utf-8")
        for n in notices:
            print(f"notice: {n}", file=sys.stderr)
    return EXIT_ENV if failures else EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="kernelprof",
                     description="micro-kernel performance profiling")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("list", help="kernels, variants, call paths, library")
    p.set_defaults(func=cmd_list)

    p = sub.add_parser("bench", help="measure a single point")
    _measure_args(p)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--n", type=int, help="element count")
    g.add_argument("--bytes", type=parse_bytes, help="memory-per-invocation")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("sweep", help="measure a performance profile")
    _measure_args(p)
    p.add_argument("--min-bytes", type=parse_bytes, default=DEFAULT_MIN_BYTES)
    p.add_argument("--max-bytes", type=parse_bytes, default=DEFAULT_MAX_BYTES)
    p.add_argument("--factor", type=float, default=2.0)
    p.add_argument("--machine", default=None,
                   help="machine profile path (default: bundled reference)")
    p.add_argument("--out", required=True, help="CSV destination")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("fit", help="fit the invocation-cost model to a profile")
    p.add_argument("--csv", required=True)
    p.add_argument("--label", required=True)
    p.add_argument("--path", default=None,
                   choices=[c.short for c in CallPathId])
    p.add_argument("--align", default=None,
                   choices=[a.short for a in AlignmentPolicy])
    p.add_argument("--region", type=parse_range, default=None,
                   help="memory range LO:HI to fit within")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("compare", help="best implementation per memory range")
    p.add_argument("--csv", action="append", required=True)
    p.add_argument("--range", type=parse_range, required=True)
    p.add_argument("--exclude", action="append", default=[],
                   help="label or fnmatch pattern to exclude (repeatable)")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("probe", help="measure peak bandwidth and compute")
    p.add_argument("--machine-out", required=True)
    p.add_argument("--reps", type=int, default=5)
    p.set_defaults(func=cmd_probe)

    p = sub.add_parser("reproduce", help="full experiment matrix")
    p.add_argument("--machine", default=None)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--min-bytes", type=parse_bytes, default=DEFAULT_MIN_BYTES)
    p.add_argument("--max-bytes", type=parse_bytes, default=DEFAULT_MAX_BYTES)
    p.add_argument("--factor", type=float, default=2.0)
    p.add_argument("--reps", type=int, default=3)
    p.add_argument("--warmup", type=int, default=2)
    p.add_argument("--min-inner-ms", type=float, default=20.0)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--kernels", default=None,
                   help="comma-separated subset, e.g. arradd,hsum")
    p.set_defaults(func=cmd_reproduce)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"kernelprof: {exc}", file=sys.stderr)
        return exc.code
    except (AlignmentMismatchError, StrideError, VariantUnavailableError,
            ValueError) as exc:
        print(f"kernelprof: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (LibraryLoadError, SweepError, MemoryError, OSError) as exc:
        print(f"kernelprof: {exc}", file=sys.stderr)
        return EXIT_ENV


if __name__ == "__main__":
    sys.exit(main())
