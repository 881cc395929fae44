"""Compiled kernel variants: scalar, out-of-order, and vectorized forms.

Codegen control, not just source shape, distinguishes the variants:

* Scalar forms carry a runtime-opaque ``step`` argument (always 1). The
  compiler cannot prove unit stride, so the loops stay scalar even at full
  optimization - mirroring a JIT whose alias/alignment analyses fail.
* Vect forms of the reduction-style kernels (HorizontalSum, HornerData1st)
  are packet-shaped loops over unsigned indices; LLVM's SLP pass packs each
  4-lane group into one 256-bit operation without reassociating, so results
  stay bit-identical to the same lane structure evaluated scalar.
* Vect forms of the element-wise kernels (ArrayAddition, HornerCoeff1st)
  are canonical loops the loop-vectorizer handles with runtime alias checks.
  Their VectOoo twins share the body: the vectorizer already interleaves
  independent packets, and a manual in-place packet unroll would defeat
  vectorization entirely.

All arithmetic is strict IEEE binary64: no fastmath, no FMA contraction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from numba import carray, cfunc, int64, njit, types, uint64

from .._intrinsics import load_u64
from .buffers import KernelBuffers
from .ids import AlignmentPolicy, KernelId, VariantId

__all__ = [
    "VariantUnavailableError", "AlignmentMismatchError", "StrideError",
    "list_variants", "run_variant", "variant_meta", "cfunc_address",
    "accumulator_chains", "check_alignment", "debug_partials", "host_vector_bits",
]


class VariantUnavailableError(RuntimeError):
    pass


class AlignmentMismatchError(ValueError):
    pass


class StrideError(ValueError):
    pass


def host_vector_bits() -> int:
    """Widest double-precision vector the host CPU offers, in bits."""
    import llvmlite.binding as llb

    feats = llb.get_host_cpu_features()
    if feats.get("avx512f"):
        return 512
    if feats.get("avx"):
        return 256
    if feats.get("sse2"):
        return 128
    return 64


_NO_VECT_REASON = "no 256-bit vector support"


# ---------------------------------------------------------------------------
# ArrayAddition: a[i] += b[i]
# ---------------------------------------------------------------------------

@njit(cache=True)
def _arradd_scalar(a, b, step):
    n = a.shape[0]
    i = 0
    while i < n:
        a[i] += b[i]
        i += step


@njit(cache=True)
def _arradd_scalar_ooo(a, b, step):
    n = a.shape[0]
    i = 0
    while i < n:
        a[i] += b[i]
        a[i + step] += b[i + step]
        a[i + 2 * step] += b[i + 2 * step]
        a[i + 3 * step] += b[i + 3 * step]
        i += 4 * step


@njit(cache=True)
def _arradd_vect(a, b):
    for i in range(a.shape[0]):
        a[i] += b[i]


@njit(cache=True)
def _arradd_vect_ooo(a, b):
    for i in range(a.shape[0]):
        a[i] += b[i]


# ---------------------------------------------------------------------------
# HorizontalSum: sum(a)
# ---------------------------------------------------------------------------

@njit(cache=True)
def _hsum_scalar(a):
    s = 0.0
    for i in range(a.shape[0]):
        s += a[i]
    return s


@njit(cache=True)
def _hsum_scalar_ooo(a, step):
    n = a.shape[0]
    s0 = 0.0
    s1 = 0.0
    s2 = 0.0
    s3 = 0.0
    i = 0
    while i < n:
        s0 += a[i]
        s1 += a[i + step]
        s2 += a[i + 2 * step]
        s3 += a[i + 3 * step]
        i += 4 * step
    return (s0 + s1) + (s2 + s3)


@njit(cache=True)
def _hsum_vect(a):
    n = uint64(a.shape[0])
    s0 = 0.0
    s1 = 0.0
    s2 = 0.0
    s3 = 0.0
    i = uint64(0)
    while i < n:
        s0 += a[i]
        s1 += a[i + uint64(1)]
        s2 += a[i + uint64(2)]
        s3 += a[i + uint64(3)]
        i += uint64(4)
    return (s0 + s1) + (s2 + s3)


@njit(cache=True)
def _hsum_vect_ooo(a):
    n = uint64(a.shape[0])
    s00 = 0.0; s01 = 0.0; s02 = 0.0; s03 = 0.0
    s10 = 0.0; s11 = 0.0; s12 = 0.0; s13 = 0.0
    s20 = 0.0; s21 = 0.0; s22 = 0.0; s23 = 0.0
    s30 = 0.0; s31 = 0.0; s32 = 0.0; s33 = 0.0
    i = uint64(0)
    while i < n:
        s00 += a[i]
        s01 += a[i + uint64(1)]
        s02 += a[i + uint64(2)]
        s03 += a[i + uint64(3)]
        s10 += a[i + uint64(4)]
        s11 += a[i + uint64(5)]
        s12 += a[i + uint64(6)]
        s13 += a[i + uint64(7)]
        s20 += a[i + uint64(8)]
        s21 += a[i + uint64(9)]
        s22 += a[i + uint64(10)]
        s23 += a[i + uint64(11)]
        s30 += a[i + uint64(12)]
        s31 += a[i + uint64(13)]
        s32 += a[i + uint64(14)]
        s33 += a[i + uint64(15)]
        i += uint64(16)
    # combine the 4 packet chains pairwise, then the 4 lanes
    l0 = (s00 + s10) + (s20 + s30)
    l1 = (s01 + s11) + (s21 + s31)
    l2 = (s02 + s12) + (s22 + s32)
    l3 = (s03 + s13) + (s23 + s33)
    return (l0 + l1) + (l2 + l3)


# ---------------------------------------------------------------------------
# HornerCoeff1st: polynomial over all points, looping coefficients outermost
# ---------------------------------------------------------------------------

@njit(cache=True)
def _horner_c1_scalar(coeffs, x, y, step):
    n = x.shape[0]
    c0 = coeffs[0]
    j = 0
    while j < n:
        y[j] = c0
        j += step
    for k in range(1, coeffs.shape[0]):
        ck = coeffs[k]
        j = 0
        while j < n:
            y[j] = y[j] * x[j] + ck
            j += step


@njit(cache=True)
def _horner_c1_scalar_ooo(coeffs, x, y, step):
    n = x.shape[0]
    c0 = coeffs[0]
    j = 0
    while j < n:
        y[j] = c0
        y[j + step] = c0
        y[j + 2 * step] = c0
        y[j + 3 * step] = c0
        j += 4 * step
    for k in range(1, coeffs.shape[0]):
        ck = coeffs[k]
        j = 0
        while j < n:
            y[j] = y[j] * x[j] + ck
            y[j + step] = y[j + step] * x[j + step] + ck
            y[j + 2 * step] = y[j + 2 * step] * x[j + 2 * step] + ck
            y[j + 3 * step] = y[j + 3 * step] * x[j + 3 * step] + ck
            j += 4 * step


@njit(cache=True)
def _horner_c1_vect(coeffs, x, y):
    n = x.shape[0]
    c0 = coeffs[0]
    for j in range(n):
        y[j] = c0
    for k in range(1, coeffs.shape[0]):
        ck = coeffs[k]
        for j in range(n):
            y[j] = y[j] * x[j] + ck


@njit(cache=True)
def _horner_c1_vect_ooo(coeffs, x, y):
    n = x.shape[0]
    c0 = coeffs[0]
    for j in range(n):
        y[j] = c0
    for k in range(1, coeffs.shape[0]):
        ck = coeffs[k]
        for j in range(n):
            y[j] = y[j] * x[j] + ck


# ---------------------------------------------------------------------------
# HornerData1st: polynomial per point, looping data outermost
# ---------------------------------------------------------------------------

@njit(cache=True)
def _horner_d1_scalar(coeffs, x, y, step):
    n = x.shape[0]
    m = coeffs.shape[0]
    j = 0
    while j < n:
        xj = x[j]
        acc = coeffs[0]
        for k in range(1, m):
            acc = acc * xj + coeffs[k]
        y[j] = acc
        j += step


@njit(cache=True)
def _horner_d1_scalar_ooo(coeffs, x, y, step):
    n = x.shape[0]
    m = coeffs.shape[0]
    j = 0
    while j < n:
        x0 = x[j]
        x1 = x[j + step]
        x2 = x[j + 2 * step]
        x3 = x[j + 3 * step]
        x4 = x[j + 4 * step]
        x5 = x[j + 5 * step]
        x6 = x[j + 6 * step]
        x7 = x[j + 7 * step]
        c0 = coeffs[0]
        a0 = c0; a1 = c0; a2 = c0; a3 = c0
        a4 = c0; a5 = c0; a6 = c0; a7 = c0
        for k in range(1, m):
            ck = coeffs[k]
            a0 = a0 * x0 + ck
            a1 = a1 * x1 + ck
            a2 = a2 * x2 + ck
            a3 = a3 * x3 + ck
            a4 = a4 * x4 + ck
            a5 = a5 * x5 + ck
            a6 = a6 * x6 + ck
            a7 = a7 * x7 + ck
        y[j] = a0
        y[j + step] = a1
        y[j + 2 * step] = a2
        y[j + 3 * step] = a3
        y[j + 4 * step] = a4
        y[j + 5 * step] = a5
        y[j + 6 * step] = a6
        y[j + 7 * step] = a7
        j += 8 * step


@njit(cache=True)
def _horner_d1_vect(coeffs, x, y):
    n = uint64(x.shape[0])
    m = coeffs.shape[0]
    j = uint64(0)
    while j < n:
        c0 = coeffs[0]
        a0 = c0; a1 = c0; a2 = c0; a3 = c0
        x0 = x[j]
        x1 = x[j + uint64(1)]
        x2 = x[j + uint64(2)]
        x3 = x[j + uint64(3)]
        for k in range(1, m):
            ck = coeffs[k]
            a0 = a0 * x0 + ck
            a1 = a1 * x1 + ck
            a2 = a2 * x2 + ck
            a3 = a3 * x3 + ck
        y[j] = a0
        y[j + uint64(1)] = a1
        y[j + uint64(2)] = a2
        y[j + uint64(3)] = a3
        j += uint64(4)


@njit(cache=True)
def _horner_d1_vect_ooo(coeffs, x, y):
    n = uint64(x.shape[0])
    m = coeffs.shape[0]
    j = uint64(0)
    while j < n:
        c0 = coeffs[0]
        a00 = c0; a01 = c0; a02 = c0; a03 = c0
        a10 = c0; a11 = c0; a12 = c0; a13 = c0
        a20 = c0; a21 = c0; a22 = c0; a23 = c0
        a30 = c0; a31 = c0; a32 = c0; a33 = c0
        a40 = c0; a41 = c0; a42 = c0; a43 = c0
        a50 = c0; a51 = c0; a52 = c0; a53 = c0
        a60 = c0; a61 = c0; a62 = c0; a63 = c0
        a70 = c0; a71 = c0; a72 = c0; a73 = c0
        x00 = x[j];              x01 = x[j + uint64(1)]
        x02 = x[j + uint64(2)];  x03 = x[j + uint64(3)]
        x10 = x[j + uint64(4)];  x11 = x[j + uint64(5)]
        x12 = x[j + uint64(6)];  x13 = x[j + uint64(7)]
        x20 = x[j + uint64(8)];  x21 = x[j + uint64(9)]
        x22 = x[j + uint64(10)]; x23 = x[j + uint64(11)]
        x30 = x[j + uint64(12)]; x31 = x[j + uint64(13)]
        x32 = x[j + uint64(14)]; x33 = x[j + uint64(15)]
        x40 = x[j + uint64(16)]; x41 = x[j + uint64(17)]
        x42 = x[j + uint64(18)]; x43 = x[j + uint64(19)]
        x50 = x[j + uint64(20)]; x51 = x[j + uint64(21)]
        x52 = x[j + uint64(22)]; x53 = x[j + uint64(23)]
        x60 = x[j + uint64(24)]; x61 = x[j + uint64(25)]
        x62 = x[j + uint64(26)]; x63 = x[j + uint64(27)]
        x70 = x[j + uint64(28)]; x71 = x[j + uint64(29)]
        x72 = x[j + uint64(30)]; x73 = x[j + uint64(31)]
        for k in range(1, m):
            ck = coeffs[k]
            a00 = a00 * x00 + ck; a01 = a01 * x01 + ck
            a02 = a02 * x02 + ck; a03 = a03 * x03 + ck
            a10 = a10 * x10 + ck; a11 = a11 * x11 + ck
            a12 = a12 * x12 + ck; a13 = a13 * x13 + ck
            a20 = a20 * x20 + ck; a21 = a21 * x21 + ck
            a22 = a22 * x22 + ck; a23 = a23 * x23 + ck
            a30 = a30 * x30 + ck; a31 = a31 * x31 + ck
            a32 = a32 * x32 + ck; a33 = a33 * x33 + ck
            a40 = a40 * x40 + ck; a41 = a41 * x41 + ck
            a42 = a42 * x42 + ck; a43 = a43 * x43 + ck
            a50 = a50 * x50 + ck; a51 = a51 * x51 + ck
            a52 = a52 * x52 + ck; a53 = a53 * x53 + ck
            a60 = a60 * x60 + ck; a61 = a61 * x61 + ck
            a62 = a62 * x62 + ck; a63 = a63 * x63 + ck
            a70 = a70 * x70 + ck; a71 = a71 * x71 + ck
            a72 = a72 * x72 + ck; a73 = a73 * x73 + ck
        y[j] = a00;              y[j + uint64(1)] = a01
        y[j + uint64(2)] = a02;  y[j + uint64(3)] = a03
        y[j + uint64(4)] = a10;  y[j + uint64(5)] = a11
        y[j + uint64(6)] = a12;  y[j + uint64(7)] = a13
        y[j + uint64(8)] = a20;  y[j + uint64(9)] = a21
        y[j + uint64(10)] = a22; y[j + uint64(11)] = a23
        y[j + uint64(12)] = a30; y[j + uint64(13)] = a31
        y[j + uint64(14)] = a32; y[j + uint64(15)] = a33
        y[j + uint64(16)] = a40; y[j + uint64(17)] = a41
        y[j + uint64(18)] = a42; y[j + uint64(19)] = a43
        y[j + uint64(20)] = a50; y[j + uint64(21)] = a51
        y[j + uint64(22)] = a52; y[j + uint64(23)] = a53
        y[j + uint64(24)] = a60; y[j + uint64(25)] = a61
        y[j + uint64(26)] = a62; y[j + uint64(27)] = a63
        y[j + uint64(28)] = a70; y[j + uint64(29)] = a71
        y[j + uint64(30)] = a72; y[j + uint64(31)] = a73
        j += uint64(32)


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VariantMeta:
    fn: Callable
    sigclass: str            # inplace_binary | reduce | horner
    needs_step: bool
    stride: int              # n must be a multiple of this
    chains: int              # independent dependency chains (accumulators)
    needs_vector_host: bool


_IMPLS: dict[tuple[KernelId, VariantId], VariantMeta] = {
    (KernelId.ArrayAddition, VariantId.Scalar):
        VariantMeta(_arradd_scalar, "inplace_binary", True, 1, 1, False),
    (KernelId.ArrayAddition, VariantId.ScalarOoo):
        VariantMeta(_arradd_scalar_ooo, "inplace_binary", True, 4, 4, False),
    (KernelId.ArrayAddition, VariantId.Vect):
        VariantMeta(_arradd_vect, "inplace_binary", False, 4, 1, True),
    (KernelId.ArrayAddition, VariantId.VectOoo):
        VariantMeta(_arradd_vect_ooo, "inplace_binary", False, 4, 4, True),
    (KernelId.ArrayAddition, VariantId.VectUnaligned):
        VariantMeta(_arradd_vect, "inplace_binary", False, 4, 1, True),

    (KernelId.HorizontalSum, VariantId.Scalar):
        VariantMeta(_hsum_scalar, "reduce", False, 1, 1, False),
    (KernelId.HorizontalSum, VariantId.ScalarOoo):
        VariantMeta(_hsum_scalar_ooo, "reduce", True, 4, 4, False),
    (KernelId.HorizontalSum, VariantId.Vect):
        VariantMeta(_hsum_vect, "reduce", False, 4, 1, True),
    (KernelId.HorizontalSum, VariantId.VectOoo):
        VariantMeta(_hsum_vect_ooo, "reduce", False, 16, 4, True),
    (KernelId.HorizontalSum, VariantId.VectUnaligned):
        VariantMeta(_hsum_vect, "reduce", False, 4, 1, True),

    (KernelId.HornerCoeff1st, VariantId.Scalar):
        VariantMeta(_horner_c1_scalar, "horner", True, 1, 1, False),
    (KernelId.HornerCoeff1st, VariantId.ScalarOoo):
        VariantMeta(_horner_c1_scalar_ooo, "horner", True, 4, 4, False),
    (KernelId.HornerCoeff1st, VariantId.Vect):
        VariantMeta(_horner_c1_vect, "horner", False, 4, 1, True),
    (KernelId.HornerCoeff1st, VariantId.VectOoo):
        VariantMeta(_horner_c1_vect_ooo, "horner", False, 4, 4, True),
    (KernelId.HornerCoeff1st, VariantId.VectUnaligned):
        VariantMeta(_horner_c1_vect, "horner", False, 4, 1, True),

    (KernelId.HornerData1st, VariantId.Scalar):
        VariantMeta(_horner_d1_scalar, "horner", True, 1, 1, False),
    (KernelId.HornerData1st, VariantId.ScalarOoo):
        VariantMeta(_horner_d1_scalar_ooo, "horner", True, 8, 8, False),
    (KernelId.HornerData1st, VariantId.Vect):
        VariantMeta(_horner_d1_vect, "horner", False, 4, 1, True),
    (KernelId.HornerData1st, VariantId.VectOoo):
        VariantMeta(_horner_d1_vect_ooo, "horner", False, 32, 8, True),
    (KernelId.HornerData1st, VariantId.VectUnaligned):
        VariantMeta(_horner_d1_vect, "horner", False, 4, 1, True),
}


def variant_meta(kernel: KernelId, variant: VariantId) -> VariantMeta:
    return _IMPLS[(kernel, variant)]


def accumulator_chains(kernel: KernelId, variant: VariantId) -> int:
    return _IMPLS[(kernel, variant)].chains


def list_variants(kernel: KernelId) -> dict[VariantId, Optional[str]]:
    """Available variants; value is None when available, else the reason not."""
    vector_ok = host_vector_bits() >= 256
    out: dict[VariantId, Optional[str]] = {}
    for variant in VariantId:
        meta = _IMPLS[(kernel, variant)]
        if meta.needs_vector_host and not vector_ok:
            out[variant] = _NO_VECT_REASON
        else:
            out[variant] = None
    return out


def _check_available(kernel: KernelId, variant: VariantId) -> VariantMeta:
    reason = list_variants(kernel)[variant]
    if reason is not None:
        raise VariantUnavailableError(
            f"{kernel.short}/{variant.short} unavailable: {reason}")
    return _IMPLS[(kernel, variant)]


def check_alignment(variant: VariantId, policy: AlignmentPolicy) -> None:
    if variant in (VariantId.Vect, VariantId.VectOoo):
        if policy is not AlignmentPolicy.Aligned32:
            raise AlignmentMismatchError(
                f"{variant.short} requires {AlignmentPolicy.Aligned32.short} "
                f"buffers, got {policy.short}")
    elif variant is VariantId.VectUnaligned:
        if policy is not AlignmentPolicy.Misaligned8:
            raise AlignmentMismatchError(
                f"{variant.short} requires {AlignmentPolicy.Misaligned8.short} "
                f"buffers, got {policy.short}")


def _check_stride(kernel: KernelId, variant: VariantId, n: int,
                  meta: VariantMeta) -> None:
    if n % meta.stride != 0:
        raise StrideError(
            f"{kernel.short}/{variant.short} requires n to be a multiple of "
            f"{meta.stride}, got {n}")


def validate_run(kernel: KernelId, variant: VariantId,
                 bufs: KernelBuffers) -> VariantMeta:
    meta = _check_available(kernel, variant)
    check_alignment(variant, bufs.policy)
    _check_stride(kernel, variant, bufs.size.n, meta)
    return meta


def run_variant(kernel: KernelId, variant: VariantId, bufs: KernelBuffers):
    """Execute a variant on its buffers; returns the kernel's output values."""
    meta = validate_run(kernel, variant, bufs)
    arrays = bufs.arrays()
    args = arrays + ((1,) if meta.needs_step else ())
    result = meta.fn(*args)
    if kernel is KernelId.ArrayAddition:
        return bufs.view("a")
    if kernel is KernelId.HorizontalSum:
        return result
    return bufs.view("y")


# ---------------------------------------------------------------------------
# C-ABI entry points (numba cfuncs) for the pointer-based call paths
# ---------------------------------------------------------------------------

# Backing store for the runtime-opaque unit stride read by cfunc wrappers.
# Kept alive for the process lifetime; only ever holds 1.
_OPAQUE_STEP = np.ones(1, dtype=np.uint64)
_OPAQUE_STEP_ADDR = _OPAQUE_STEP.ctypes.data

_SIG_INPLACE = types.void(types.CPointer(types.float64),
                          types.CPointer(types.float64), types.uint64)
_SIG_REDUCE = types.float64(types.CPointer(types.float64), types.uint64)
_SIG_HORNER = types.void(types.CPointer(types.float64),
                         types.CPointer(types.float64),
                         types.CPointer(types.float64), types.uint64)

_CFUNC_CACHE: dict[tuple[KernelId, VariantId], object] = {}


def _build_cfunc(kernel: KernelId, variant: VariantId):
    meta = _IMPLS[(kernel, variant)]
    fn = meta.fn
    step_addr = _OPAQUE_STEP_ADDR

    if meta.sigclass == "inplace_binary":
        if meta.needs_step:
            @cfunc(_SIG_INPLACE, cache=False)
            def wrapper(a, b, n):
                fn(carray(a, (n,)), carray(b, (n,)),
                   int64(load_u64(step_addr)))
        else:
            @cfunc(_SIG_INPLACE, cache=False)
            def wrapper(a, b, n):
                fn(carray(a, (n,)), carray(b, (n,)))
    elif meta.sigclass == "reduce":
        if meta.needs_step:
            @cfunc(_SIG_REDUCE, cache=False)
            def wrapper(a, n):
                return fn(carray(a, (n,)), int64(load_u64(step_addr)))
        else:
            @cfunc(_SIG_REDUCE, cache=False)
            def wrapper(a, n):
                return fn(carray(a, (n,)))
    else:
        if meta.needs_step:
            @cfunc(_SIG_HORNER, cache=False)
            def wrapper(coeffs, x, y, n):
                fn(carray(coeffs, (65,)), carray(x, (n,)), carray(y, (n,)),
                   int64(load_u64(step_addr)))
        else:
            @cfunc(_SIG_HORNER, cache=False)
            def wrapper(coeffs, x, y, n):
                fn(carray(coeffs, (65,)), carray(x, (n,)), carray(y, (n,)))
    return wrapper


def cfunc_address(kernel: KernelId, variant: VariantId) -> int:
    """C-ABI entry point of an in-process variant (compiled on first use)."""
    key = (kernel, variant)
    if key not in _CFUNC_CACHE:
        _CFUNC_CACHE[key] = _build_cfunc(kernel, variant)
    return _CFUNC_CACHE[key].address


# ---------------------------------------------------------------------------
# Instrumented debug mode: partial accumulators
# ---------------------------------------------------------------------------

def _seq_sum(values: np.ndarray) -> float:
    s = 0.0
    for v in values.tolist():
        s += v
    return s


def debug_partials(kernel: KernelId, variant: VariantId,
                   bufs: KernelBuffers) -> np.ndarray:
    """Per-chain partial accumulator values, computed by a numpy mirror of
    the variant's chain structure (len == accumulator_chains).

    For HorizontalSum scalar variants the partials recombine to the
    variant's result bit-exactly; vector-chain partials recombine within
    reassociation tolerance (the kernel folds chains lane-major before its
    horizontal step). Other kernels report the first block's per-chain
    outputs.
    """
    meta = validate_run(kernel, variant, bufs)
    chains = meta.chains

    if kernel is KernelId.HorizontalSum:
        a = bufs.view("a")
        if variant is VariantId.Scalar:
            return np.array([_seq_sum(a)])
        if variant is VariantId.ScalarOoo:
            return np.array([_seq_sum(a[c::4]) for c in range(4)])
        if variant in (VariantId.Vect, VariantId.VectUnaligned):
            lanes = [_seq_sum(a[l::4]) for l in range(4)]
            return np.array([(lanes[0] + lanes[1]) + (lanes[2] + lanes[3])])
        # VectOoo: chain c covers packets c, c+4, c+8, ...
        out = []
        for c in range(4):
            lanes = []
            for l in range(4):
                idx = np.arange(4 * c + l, a.shape[0], 16)
                lanes.append(_seq_sum(a[idx]))
            out.append((lanes[0] + lanes[1]) + (lanes[2] + lanes[3]))
        return np.array(out)

    if kernel is KernelId.ArrayAddition:
        a, b = bufs.view("a"), bufs.view("b")
        return (a + b)[:chains].copy()

    # Horner kernels: per-chain accumulator of the first block
    from .reference import run_reference
    coeffs, x = bufs.view("coeffs"), bufs.view("x")
    block = chains if variant in (VariantId.Scalar, VariantId.ScalarOoo) \
        else 4 * chains
    block = min(block, x.shape[0])
    y = np.zeros(block)
    run_reference(kernel, (coeffs, x[:block], y))
    if variant in (VariantId.VectOoo,) and kernel is KernelId.HornerData1st:
        # one value per vector chain: its first lane
        return y[0:block:4].copy()
    return y[:chains].copy()
