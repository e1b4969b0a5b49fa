"""Figure rendering for the report commands.

The CLI drops a PNG next to each CSV it writes: a best-so-far energy
trace for a single run and an energy-vs-distance plot for a manifest
run. The Agg backend keeps rendering headless and reproducible; saves
go through a temp file so a failed render leaves nothing behind.
"""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)


def _save(fig, path: str):
    tmp = path + ".tmp"
    fig.savefig(tmp, format="png", dpi=120)
    plt.close(fig)
    os.replace(tmp, path)


def save_convergence_plot(trace, path: str, exact_energy: float | None = None):
    """Best-so-far energy per objective evaluation."""
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.plot(range(1, len(trace) + 1), list(trace), color="tab:blue", lw=1.5, label="best energy so far")
    if exact_energy is not None:
        ax.axhline(exact_energy, color="tab:red", ls="--", lw=1.0, label="exact ground energy")
    ax.set_xlabel("objective evaluation")
    ax.set_ylabel("energy")
    ax.grid(alpha=0.3)
    ax.legend()
    fig.tight_layout()
    _save(fig, path)


def save_curve_plot(rows, path: str):
    """Energy against distance: exact line plus optimizer markers."""
    distances = [row.distance for row in rows]
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.plot(distances, [row.exact_energy for row in rows], color="tab:red", lw=1.2, label="exact ground energy")
    ax.plot(
        distances,
        [row.vqe_energy for row in rows],
        color="tab:blue",
        marker="o",
        ls="none",
        label="optimized energy",
    )
    ax.set_xlabel("distance")
    ax.set_ylabel("energy")
    ax.grid(alpha=0.3)
    ax.legend()
    fig.tight_layout()
    _save(fig, path)
