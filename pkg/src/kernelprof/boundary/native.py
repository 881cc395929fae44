"""Native memory regions: allocations outside the tracked buffer pool."""

from __future__ import annotations

import ctypes

import numpy as np

_libc = ctypes.CDLL(None, use_errno=True)
_libc.malloc.restype = ctypes.c_void_p
_libc.malloc.argtypes = [ctypes.c_size_t]
_libc.free.argtypes = [ctypes.c_void_p]

_ALIGN = 64


class NativeRegion:
    """A malloc-backed region: explicit lifetime, never moved."""

    def __init__(self, capacity: int):
        self.capacity = int(capacity)
        self._raw = _libc.malloc(self.capacity + _ALIGN)
        if not self._raw:
            raise MemoryError(f"native allocation of {capacity} bytes failed")
        self.base = (self._raw + _ALIGN - 1) & ~(_ALIGN - 1)
        self.aligned32 = True
        self.alive = True

    def free(self) -> None:
        if self.alive:
            _libc.free(self._raw)
            self.alive = False

    def __enter__(self) -> "NativeRegion":
        return self

    def __exit__(self, *exc) -> None:
        self.free()

    def __del__(self):
        try:
            self.free()
        except Exception:
            pass

    def _check(self, offset: int, nbytes: int) -> None:
        if not self.alive:
            raise RuntimeError("native region already freed")
        if offset < 0 or offset + nbytes > self.capacity:
            raise ValueError(
                f"range [{offset}, {offset + nbytes}) outside region of "
                f"{self.capacity} bytes")

    def write(self, offset: int, values: np.ndarray) -> None:
        values = np.ascontiguousarray(values, dtype=np.float64)
        self._check(offset, values.nbytes)
        ctypes.memmove(self.base + offset, values.ctypes.data, values.nbytes)

    def read(self, offset: int, length: int) -> np.ndarray:
        self._check(offset, 8 * length)
        out = np.empty(length, dtype=np.float64)
        ctypes.memmove(out.ctypes.data, self.base + offset, out.nbytes)
        return out
