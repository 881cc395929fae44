"""Human-readable comparison reports over one kernel's profiles.

Tabulates, where the relevant pairs exist: inlining benefit (Inlined vs
Outlined), callback penalty (CallbackPinned vs NativeMemoryDirect), and
alignment penalty (aligned Vect vs VectUnaligned); percentage deltas use
the penalty framing (fast - slow) / fast. Also reports classification and
invocation-cost fits per profile.
"""

from __future__ import annotations

from typing import Optional, Sequence

from ..boundary.paths import CallPathId
from ..harness import Profile
from ..kernels.accounting import HORNER_FLOP_PER_POINT
from ..kernels.ids import KernelId, VariantId, is_horner
from ..model import (FitError, MachineProfile, arithmetic_intensity, classify,
                     fit_invocation_cost)

__all__ = ["summarize_comparison"]


def _delta_lines(name: str, fast: Optional[Profile], slow: Optional[Profile],
                 what: str) -> list[str]:
    lines = [f"{name}:"]
    if fast is None or slow is None:
        lines.append(f"  absent ({what} pair not measured)")
        return lines
    fast_by_mem = {p.memory_per_invocation: p.performance for p in fast.points}
    slow_by_mem = {p.memory_per_invocation: p.performance for p in slow.points}
    shared = sorted(set(fast_by_mem) & set(slow_by_mem))
    if not shared:
        lines.append("  absent (no shared memory points)")
        return lines
    deltas = []
    for mem in shared:
        pf, ps = fast_by_mem[mem], slow_by_mem[mem]
        delta = (pf - ps) / pf if pf > 0 else float("nan")
        deltas.append(delta)
        lines.append(f"  {mem:>12d} B  {pf / 1e9:8.3f} vs {ps / 1e9:8.3f} "
                     f"Gflop/s  delta {100 * delta:+7.2f}%")
    mean = sum(deltas) / len(deltas)
    lines.append(f"  mean delta over {len(deltas)} points: {100 * mean:+.2f}%")
    return lines


def _find(profiles: Sequence[Profile], path: CallPathId,
          variant: Optional[VariantId] = None) -> Optional[Profile]:
    for p in profiles:
        if p.path is path and (variant is None or p.variant is variant):
            return p
    return None


def summarize_comparison(profiles: Sequence[Profile],
                         machine: MachineProfile) -> str:
    if not profiles:
        return "no profiles\n"
    kernels = {p.kernel for p in profiles}
    if len(kernels) > 1:
        raise ValueError(f"profiles span several kernels: "
                         f"{sorted(k.short for k in kernels)}")
    kernel: KernelId = next(iter(kernels))

    out: list[str] = []
    out.append(f"kernel: {kernel.short}")
    out.append(f"machine: {machine.description or 'unnamed'}  "
               f"peak {machine.peak_performance / 1e9:g} Gflop/s, "
               f"bandwidth {machine.peak_bandwidth / 1e9:g} GB/s")
    if is_horner(kernel):
        out.append(f"note: flop accounting charges {HORNER_FLOP_PER_POINT} "
                   f"flops per data point (64 multiply-add steps execute 128)")
    out.append("")

    out.append("classification (at the largest measured size):")
    for p in profiles:
        last = p.points[-1]
        ai = arithmetic_intensity(last.flop_per_invocation,
                                  last.memory_per_invocation)
        bound = classify(ai, machine)
        out.append(f"  {p.label:<24s} [{p.alignment.short:9s}] "
                   f"AI={float(ai):.4f} flop/B  {bound.value}")
    out.append("")

    out.append("invocation-cost fits (loop overhead folds into the cost):")
    for p in profiles:
        try:
            fit = fit_invocation_cost(p)
        except FitError as exc:
            out.append(f"  {p.label:<24s} unfit ({exc})")
            continue
        out.append(f"  {p.label:<24s} p_max={fit.p_max / 1e9:8.3f} Gflop/s  "
                   f"I={fit.invocation_cost:12.1f} flop  "
                   f"residual={fit.rms_relative_residual:.3g}")
    out.append("")

    for variant in VariantId:
        inl = _find(profiles, CallPathId.Inlined, variant)
        outl = _find(profiles, CallPathId.Outlined, variant)
        if inl or outl:
            out.extend(_delta_lines(
                f"inlining benefit [{variant.short}] (inlined vs outlined)",
                inl, outl, "inlined/outlined"))
    out.append("")

    for variant in VariantId:
        nmd = _find(profiles, CallPathId.NativeMemoryDirect, variant)
        cbp = _find(profiles, CallPathId.CallbackPinned, variant)
        if nmd or cbp:
            out.extend(_delta_lines(
                f"callback penalty [{variant.short}] "
                f"(native memory vs pinned callbacks)",
                nmd, cbp, "native/callback"))
    out.append("")

    for path in CallPathId:
        al = _find(profiles, path, VariantId.Vect)
        mis = _find(profiles, path, VariantId.VectUnaligned)
        if al or mis:
            out.extend(_delta_lines(
                f"alignment penalty [{path.short}] (aligned vs misaligned)",
                al, mis, "aligned/misaligned"))
    out.append("")

    return "\n".join(out)
