"""Loading the native kernel library and resolving its mandated symbols."""

from __future__ import annotations

import ctypes
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from ..kernels.ids import KernelId, VariantId

__all__ = ["NativeLibrary", "LibraryLoadError", "MissingSymbolError",
           "load_native_library", "default_library_path", "symbol_for",
           "MANDATED_SYMBOLS", "ENV_LIBRARY_PATH"]

ENV_LIBRARY_PATH = "KERNELPROF_NATIVE_LIB"
LIBRARY_FILENAME = "libkernelprof_native.so"


class LibraryLoadError(RuntimeError):
    pass


class MissingSymbolError(LibraryLoadError):
    def __init__(self, path, missing):
        self.missing = list(missing)
        super().__init__(f"{path}: missing mandatory symbols: "
                         f"{', '.join(self.missing)}")


def symbol_for(kernel: KernelId, variant: VariantId) -> str:
    return f"kp_{kernel.short}_{variant.short}"


MANDATED_SYMBOLS = tuple(symbol_for(k, v) for k in KernelId for v in VariantId)
CAPABILITY_SYMBOL = "kp_has_vect"


@dataclass
class NativeLibrary:
    """Handle over a loaded library with all kernel symbols resolved."""

    path: Path
    handle: ctypes.CDLL
    symbols: dict[str, int]
    has_vect: bool

    def address_of(self, kernel: KernelId, variant: VariantId) -> int:
        return self.symbols[symbol_for(kernel, variant)]


def _symbol_address(handle: ctypes.CDLL, name: str) -> Optional[int]:
    try:
        fn = getattr(handle, name)
    except AttributeError:
        return None
    return ctypes.cast(fn, ctypes.c_void_p).value


def load_native_library(path) -> NativeLibrary:
    """dlopen the library and resolve every kernel x variant symbol.

    Raises LibraryLoadError on load failure and MissingSymbolError naming
    each absent mandatory symbol.
    """
    path = Path(path)
    if not path.exists():
        raise LibraryLoadError(f"native library not found: {path}")
    try:
        handle = ctypes.CDLL(str(path))
    except OSError as exc:
        raise LibraryLoadError(f"cannot load {path}: {exc}") from exc

    symbols: dict[str, int] = {}
    missing = []
    for name in MANDATED_SYMBOLS:
        addr = _symbol_address(handle, name)
        if addr is None:
            missing.append(name)
        else:
            symbols[name] = addr
    if missing:
        raise MissingSymbolError(path, missing)

    has_vect = False
    if _symbol_address(handle, CAPABILITY_SYMBOL) is not None:
        probe = handle[CAPABILITY_SYMBOL]
        probe.restype = ctypes.c_int
        probe.argtypes = []
        has_vect = bool(probe())

    return NativeLibrary(path=path, handle=handle, symbols=symbols,
                         has_vect=has_vect)


def default_library_path() -> Optional[Path]:
    """Locate the library: env override first, then conventional spots."""
    env = os.environ.get(ENV_LIBRARY_PATH)
    if env:
        return Path(env)
    here = Path(__file__).resolve()
    candidates = [
        here.parents[3] / "native" / LIBRARY_FILENAME,   # src layout checkout
        here.parents[2] / "native" / LIBRARY_FILENAME,
        Path.cwd() / "native" / LIBRARY_FILENAME,
        Path.cwd() / LIBRARY_FILENAME,
    ]
    for cand in candidates:
        if cand.exists():
            return cand
    return None


def try_load_default() -> Optional[NativeLibrary]:
    path = default_library_path()
    if path is None or not path.exists():
        return None
    return load_native_library(path)
