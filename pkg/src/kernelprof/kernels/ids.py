"""Kernel, variant and workload identifiers plus their canonical short names."""

from __future__ import annotations

import enum
from dataclasses import dataclass

HORNER_DEGREE = 64


class KernelId(enum.Enum):
    ArrayAddition = "arradd"
    HorizontalSum = "hsum"
    HornerCoeff1st = "horner_c1"
    HornerData1st = "horner_d1"

    @property
    def short(self) -> str:
        return self.value

    @classmethod
    def from_short(cls, name: str) -> "KernelId":
        for k in cls:
            if k.value == name:
                return k
        raise ValueError(f"unknown kernel {name!r}; expected one of "
                         f"{[k.value for k in cls]}")


class VariantId(enum.Enum):
    Scalar = "scalar"
    ScalarOoo = "scalar_ooo"
    Vect = "vect"
    VectOoo = "vect_ooo"
    VectUnaligned = "vect_unalign"

    @property
    def short(self) -> str:
        return self.value

    @property
    def is_vector(self) -> bool:
        return self in (VariantId.Vect, VariantId.VectOoo, VariantId.VectUnaligned)

    @classmethod
    def from_short(cls, name: str) -> "VariantId":
        for v in cls:
            if v.value == name:
                return v
        raise ValueError(f"unknown variant {name!r}; expected one of "
                         f"{[v.value for v in cls]}")


class AlignmentPolicy(enum.Enum):
    """Placement of a buffer's logical base address within a 32-byte packet.

    Aligned32: base address divisible by 32 (every 4-double packet aligned).
    Misaligned8: base address == 8 (mod 32) - element-aligned, never
    packet-aligned, so every 32-byte access straddles a packet boundary.
    """

    Aligned32 = "aligned32"
    Misaligned8 = "mis8"

    @property
    def short(self) -> str:
        return self.value

    @property
    def offset_mod32(self) -> int:
        return 0 if self is AlignmentPolicy.Aligned32 else 8

    @classmethod
    def from_short(cls, name: str) -> "AlignmentPolicy":
        for p in cls:
            if p.value == name:
                return p
        raise ValueError(f"unknown alignment policy {name!r}; expected one of "
                         f"{[p.value for p in cls]}")


@dataclass(frozen=True)
class WorkloadSize:
    """Element count of the data array, plus polynomial degree for Horner."""

    n: int
    degree: int = HORNER_DEGREE

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.degree != HORNER_DEGREE:
            raise ValueError(f"degree is fixed at {HORNER_DEGREE}, got {self.degree}")

    @property
    def sweep_valid(self) -> bool:
        """True when n satisfies the uniform-sweep stride constraint."""
        return self.n % 16 == 0


# Buffer roles, in kernel-signature order.  The first data-array role is the
# one the callback-pinned path pins.
KERNEL_ROLES: dict[KernelId, tuple[str, ...]] = {
    KernelId.ArrayAddition: ("a", "b"),
    KernelId.HorizontalSum: ("a",),
    KernelId.HornerCoeff1st: ("coeffs", "x", "y"),
    KernelId.HornerData1st: ("coeffs", "x", "y"),
}

PINNED_ROLE: dict[KernelId, str] = {
    KernelId.ArrayAddition: "a",
    KernelId.HorizontalSum: "a",
    KernelId.HornerCoeff1st: "x",
    KernelId.HornerData1st: "x",
}


def is_horner(kernel: KernelId) -> bool:
    return kernel in (KernelId.HornerCoeff1st, KernelId.HornerData1st)


def buffer_lengths(kernel: KernelId, size: WorkloadSize) -> dict[str, int]:
    """Element count of each buffer role for a kernel at a given size."""
    n = size.n
    if kernel is KernelId.ArrayAddition:
        return {"a": n, "b": n}
    if kernel is KernelId.HorizontalSum:
        return {"a": n}
    return {"coeffs": size.degree + 1, "x": n, "y": n}
