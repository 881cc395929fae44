"""Machine-profile files: line-oriented `key = value` text.

Mandatory numeric keys: peak_gflops, peak_bandwidth_gbs, l1_bytes,
l2_bytes, l3_bytes. Optional: description. Unknown keys are rejected.
Blank lines and '#' comments are permitted.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from ..model import MachineProfile

__all__ = ["read_machine_profile", "write_machine_profile",
           "reference_machine", "MachineFileError", "REFERENCE_MACHINE_NAME"]

REFERENCE_MACHINE_NAME = "sandybridge-i5-2500"

_NUMERIC_KEYS = ("peak_gflops", "peak_bandwidth_gbs",
                 "l1_bytes", "l2_bytes", "l3_bytes")
_ALL_KEYS = _NUMERIC_KEYS + ("description",)


class MachineFileError(ValueError):
    pass


def read_machine_profile(source) -> MachineProfile:
    path = Path(source)
    values: dict[str, str] = {}
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise MachineFileError(f"{path}:{lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in _ALL_KEYS:
            raise MachineFileError(f"{path}:{lineno}: unknown key {key!r}")
        if key in values:
            raise MachineFileError(f"{path}:{lineno}: duplicate key {key!r}")
        values[key] = value.strip()

    missing = [k for k in _NUMERIC_KEYS if k not in values]
    if missing:
        raise MachineFileError(f"{path}: missing mandatory keys: "
                               f"{', '.join(missing)}")
    try:
        nums = {k: float(values[k]) for k in _NUMERIC_KEYS}
    except ValueError as exc:
        raise MachineFileError(f"{path}: non-numeric value: {exc}") from exc

    return MachineProfile(
        peak_performance=nums["peak_gflops"] * 1e9,
        peak_bandwidth=nums["peak_bandwidth_gbs"] * 1e9,
        cache_sizes=((1, int(nums["l1_bytes"]), "L1d"),
                     (2, int(nums["l2_bytes"]), "L2"),
                     (3, int(nums["l3_bytes"]), "L3")),
        description=values.get("description", ""),
    )


def write_machine_profile(machine: MachineProfile, destination) -> None:
    try:
        caches = {lvl: machine.cache_bytes(lvl) for lvl in (1, 2, 3)}
    except KeyError as exc:
        raise MachineFileError(f"machine profile lacks cache level {exc}") from exc
    lines = [
        f"peak_gflops = {machine.peak_performance / 1e9!r}",
        f"peak_bandwidth_gbs = {machine.peak_bandwidth / 1e9!r}",
        f"l1_bytes = {caches[1]}",
        f"l2_bytes = {caches[2]}",
        f"l3_bytes = {caches[3]}",
    ]
    if machine.description:
        lines.append(f"description = {machine.description}")
    Path(destination).write_text("\n".join(lines) + "\n", encoding="utf-8")


def reference_machine() -> MachineProfile:
    """The bundled reference machine file, parsed."""
    ref = resources.files("kernelprof") / "machines" / f"{REFERENCE_MACHINE_NAME}.profile"
    with resources.as_file(ref) as path:
        return read_machine_profile(path)
