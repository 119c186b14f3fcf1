"""Matplotlib helpers for the report paths.

Figures are rendered headless and written next to the delimited reports.
PNG metadata is pinned so repeated runs with identical data produce
identical bytes.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)


def new_figure(width: float = 6.4, height: float = 4.0):
    fig, ax = plt.subplots(figsize=(width, height))
    ax.grid(True, alpha=0.3)
    return fig, ax


def save_figure(fig, path) -> None:
    fig.savefig(
        path,
        dpi=150,
        bbox_inches="tight",
        metadata={"Software": "choresolver"},
    )
    plt.close(fig)
