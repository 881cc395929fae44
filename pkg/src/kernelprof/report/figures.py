"""Matplotlib renderings of performance profiles (PNG companions to the
deterministic SVG charts)."""

from __future__ import annotations

from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from ..harness import Profile
from ..model import MachineProfile

__all__ = ["render_profile_figure"]


def render_profile_figure(profiles: Sequence[Profile],
                          machine: MachineProfile, destination,
                          title: str = "") -> None:
    if not profiles:
        raise ValueError("at least one profile is required")
    fig, ax = plt.subplots(figsize=(9, 5.5))
    for prof in profiles:
        ax.plot(prof.mem_bytes, [p / 1e9 for p in prof.performances],
                marker="o", markersize=3, linewidth=1.2,
                label=f"{prof.label} [{prof.alignment.short}]")
    for lvl, size, _ in machine.cache_sizes:
        ax.axvline(size, color="grey", linestyle=":", linewidth=0.8)
        ax.annotate(f"L{lvl}", (size, ax.get_ylim()[1]),
                    textcoords="offset points", xytext=(2, -10),
                    fontsize=8, color="grey")
    ax.set_xscale("log", base=2)
    ax.set_xlabel("memory-per-invocation (bytes)")
    ax.set_ylabel("Gflop/s")
    ax.set_title(title or f"{profiles[0].kernel.short} performance profile")
    ax.grid(True, which="major", alpha=0.3)
    ax.legend(fontsize=8, loc="best")
    fig.tight_layout()
    fig.savefig(destination, dpi=120)
    plt.close(fig)
