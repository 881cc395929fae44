"""Self-contained SVG performance charts: log2-memory x-axis, flop/s
y-axis, one polyline per profile, vertical cache markers.

Emitted directly (no plotting library) with fixed formatting so identical
inputs produce identical bytes.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Sequence

from ..harness import Profile
from ..model import MachineProfile

__all__ = ["render_profile_chart"]

_W, _H = 960, 600
_ML, _MR, _MT, _MB = 80, 200, 40, 60
_PALETTE = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
            "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"]


def _fmt(v: float) -> str:
    return f"{v:.3f}"


def _mem_label(mem_bytes: float) -> str:
    if mem_bytes >= 1 << 20:
        return f"{mem_bytes / (1 << 20):g}MiB"
    if mem_bytes >= 1 << 10:
        return f"{mem_bytes / (1 << 10):g}kiB"
    return f"{mem_bytes:g}B"


def render_profile_chart(profiles: Sequence[Profile],
                         machine: MachineProfile, destination) -> None:
    if not profiles:
        raise ValueError("at least one profile is required")

    caches = [(lvl, size, note) for lvl, size, note in machine.cache_sizes]
    xs_all = [math.log2(p.memory_per_invocation)
              for prof in profiles for p in prof.points]
    xs_all += [math.log2(size) for _, size, _ in caches]
    x_lo, x_hi = min(xs_all) - 0.25, max(xs_all) + 0.25
    y_hi = max(p.performance for prof in profiles for p in prof.points) * 1.08
    if y_hi <= 0:
        y_hi = 1.0

    def sx(x: float) -> float:
        return _ML + (x - x_lo) / (x_hi - x_lo) * (_W - _ML - _MR)

    def sy(y: float) -> float:
        return _H - _MB - y / y_hi * (_H - _MT - _MB)

    parts: list[str] = []
    parts.append(f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" '
                 f'height="{_H}" viewBox="0 0 {_W} {_H}">')
    parts.append(f'<rect width="{_W}" height="{_H}" fill="white"/>')
    parts.append(f'<text x="{_ML}" y="24" font-family="monospace" '
                 f'font-size="14">performance profile '
                 f'({machine.description or "unnamed machine"})</text>')

    # axes
    x0, y0 = sx(x_lo), sy(0.0)
    parts.append(f'<line class="axis" x1="{_fmt(x0)}" y1="{_fmt(sy(y_hi))}" '
                 f'x2="{_fmt(x0)}" y2="{_fmt(y0)}" stroke="black"/>')
    parts.append(f'<line class="axis" x1="{_fmt(x0)}" y1="{_fmt(y0)}" '
                 f'x2="{_fmt(sx(x_hi))}" y2="{_fmt(y0)}" stroke="black"/>')

    # x ticks at integer log2 positions
    k = math.ceil(x_lo)
    while k <= math.floor(x_hi):
        px = sx(k)
        parts.append(f'<line class="tick" x1="{_fmt(px)}" y1="{_fmt(y0)}" '
                     f'x2="{_fmt(px)}" y2="{_fmt(y0 + 5)}" stroke="black"/>')
        if k % 2 == 0:
            parts.append(f'<text x="{_fmt(px)}" y="{_fmt(y0 + 20)}" '
                         f'font-family="monospace" font-size="10" '
                         f'text-anchor="middle">{_mem_label(2.0 ** k)}</text>')
        k += 1
    parts.append(f'<text x="{_fmt(sx((x_lo + x_hi) / 2))}" y="{_H - 12}" '
                 f'font-family="monospace" font-size="12" '
                 f'text-anchor="middle">memory-per-invocation (log2)</text>')

    # y ticks
    for frac in (0.0, 0.25, 0.5, 0.75, 1.0):
        yv = frac * y_hi
        py = sy(yv)
        parts.append(f'<line class="tick" x1="{_fmt(x0 - 5)}" y1="{_fmt(py)}" '
                     f'x2="{_fmt(x0)}" y2="{_fmt(py)}" stroke="black"/>')
        parts.append(f'<text x="{_fmt(x0 - 8)}" y="{_fmt(py + 3)}" '
                     f'font-family="monospace" font-size="10" '
                     f'text-anchor="end">{yv / 1e9:.2f}</text>')
    parts.append(f'<text x="18" y="{_fmt(sy(y_hi / 2))}" font-family="monospace" '
                 f'font-size="12" transform="rotate(-90 18 '
                 f'{_fmt(sy(y_hi / 2))})" text-anchor="middle">Gflop/s</text>')

    # cache markers
    for lvl, size, note in caches:
        px = sx(math.log2(size))
        parts.append(f'<line class="cache-marker" x1="{_fmt(px)}" '
                     f'y1="{_fmt(sy(y_hi))}" x2="{_fmt(px)}" y2="{_fmt(y0)}" '
                     f'stroke="#999999" stroke-dasharray="4 3"/>')
        parts.append(f'<text x="{_fmt(px + 3)}" y="{_fmt(sy(y_hi) + 12)}" '
                     f'font-family="monospace" font-size="10" fill="#666666">'
                     f'L{lvl} {_mem_label(size)}</text>')

    # one polyline per profile, plus legend entries
    for idx, prof in enumerate(profiles):
        color = _PALETTE[idx % len(_PALETTE)]
        pts = " ".join(
            f"{_fmt(sx(math.log2(p.memory_per_invocation)))},"
            f"{_fmt(sy(p.performance))}" for p in prof.points)
        parts.append(f'<polyline class="profile" fill="none" '
                     f'stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        ly = _MT + 16 * idx
        lx = _W - _MR + 12
        parts.append(f'<rect x="{lx}" y="{ly}" width="10" height="10" '
                     f'fill="{color}"/>')
        parts.append(f'<text x="{lx + 15}" y="{ly + 9}" '
                     f'font-family="monospace" font-size="11">'
                     f'{prof.label} [{prof.kernel.short}/{prof.alignment.short}]'
                     f'</text>')

    parts.append("</svg>")
    Path(destination).write_bytes("\n".join(parts).encode("utf-8"))
