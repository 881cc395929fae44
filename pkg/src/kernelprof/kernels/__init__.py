"""Micro-kernels: identifiers, accounting, buffers, reference oracle, variants."""

from .accounting import (HORNER_FLOP_PER_POINT, elements_for_memory,
                         flop_per_invocation, memory_per_invocation,
                         min_sweep_n, reassociation_rtol)
from .buffers import Buffer, KernelBuffers, allocate, make_buffers
from .ids import (HORNER_DEGREE, KERNEL_ROLES, PINNED_ROLE, AlignmentPolicy,
                  KernelId, VariantId, WorkloadSize, buffer_lengths, is_horner)
from .reference import SizeMismatchError, run_reference
from .variants import (AlignmentMismatchError, StrideError,
                       VariantUnavailableError, accumulator_chains,
                       cfunc_address, check_alignment, debug_partials,
                       host_vector_bits, list_variants, run_variant,
                       validate_run, variant_meta)

__all__ = [
    "HORNER_DEGREE", "HORNER_FLOP_PER_POINT", "KERNEL_ROLES", "PINNED_ROLE",
    "AlignmentPolicy", "KernelId", "VariantId", "WorkloadSize",
    "Buffer", "KernelBuffers", "allocate", "make_buffers",
    "buffer_lengths", "is_horner", "elements_for_memory",
    "flop_per_invocation", "memory_per_invocation", "min_sweep_n",
    "reassociation_rtol",
    "SizeMismatchError", "run_reference",
    "AlignmentMismatchError", "StrideError", "VariantUnavailableError",
    "accumulator_chains", "cfunc_address", "check_alignment", "debug_partials",
    "host_vector_bits", "list_variants", "run_variant", "validate_run",
    "variant_meta",
]
