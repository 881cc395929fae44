"""Call-boundary regimes around the kernels: inlined and outlined in-process
calls, dynamic-symbol dispatch into the native library, callback-mediated
buffer access, and native-memory staging."""

from .library import (ENV_LIBRARY_PATH, MANDATED_SYMBOLS, LibraryLoadError,
                      MissingSymbolError, NativeLibrary, default_library_path,
                      load_native_library, symbol_for, try_load_default)
from .native import NativeRegion
from .paths import (IN_PROCESS_PATHS, CallPathId, PathUnavailableError,
                    PreparedCall, invoke, path_available, pin, prepare,
                    release)
from .table import (Counters, FunctionTable, PinError, PinnedDescriptor,
                    ReleaseError, ScratchExhaustedError)

__all__ = [
    "ENV_LIBRARY_PATH", "MANDATED_SYMBOLS", "LibraryLoadError",
    "MissingSymbolError", "NativeLibrary", "default_library_path",
    "load_native_library", "symbol_for", "try_load_default",
    "NativeRegion",
    "IN_PROCESS_PATHS", "CallPathId", "PathUnavailableError", "PreparedCall",
    "invoke", "path_available", "pin", "prepare", "release",
    "Counters", "FunctionTable", "PinError", "PinnedDescriptor",
    "ReleaseError", "ScratchExhaustedError",
]
