"""Implementation labels: Type_InvocationOpt_AsymptoticOpts.

In-process paths map to java-type labels, dynamic/native paths to
jni-type labels. The invocation-optimization attribute distinguishes the
six call paths; the asymptotic attribute encodes the variant.
"""

from __future__ import annotations

import re

from .boundary.paths import CallPathId
from .kernels.ids import VariantId

__all__ = ["label_for", "LABEL_RE", "is_valid_label"]

_PATH_ATTRS: dict[CallPathId, tuple[str, str | None]] = {
    CallPathId.Inlined: ("java", "inline"),
    CallPathId.Outlined: ("java", None),
    CallPathId.DynamicSymbol: ("jni", "dyn"),
    CallPathId.CallbackPinned: ("jni", None),
    CallPathId.CallbackCopy: ("jni", "copy"),
    CallPathId.NativeMemoryDirect: ("jni", "native"),
}

_VARIANT_ATTRS: dict[VariantId, str | None] = {
    VariantId.Scalar: None,
    VariantId.ScalarOoo: "ooo",
    VariantId.Vect: "vect",
    VariantId.VectOoo: "vect_ooo",
    VariantId.VectUnaligned: "vect_unalign",
}

LABEL_RE = re.compile(
    r"^(java|jni)(_(inline|native|dyn|copy))?(_vect(_unalign)?)?(_ooo)?$")


def label_for(path: CallPathId, variant: VariantId) -> str:
    kind, invopt = _PATH_ATTRS[path]
    parts = [kind]
    if invopt:
        parts.append(invopt)
    asym = _VARIANT_ATTRS[variant]
    if asym:
        parts.append(asym)
    return "_".join(parts)


def is_valid_label(label: str) -> bool:
    return LABEL_RE.match(label) is not None
