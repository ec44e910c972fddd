"""Matplotlib figures: a single diagram, and betti numbers per degree."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.patches import Circle  # noqa: E402

from .diagrams import Diagram, diagram_text, layout  # noqa: E402

# fixed metadata keeps repeated renders byte-identical
_META = {"Software": None}


def render_png(d: Diagram, path: str) -> None:
    vertices, leaf_pts, segments = layout(d)
    fig, ax = plt.subplots(figsize=(4, 4), dpi=100)
    for a, b in segments:
        ax.plot([a[0], b[0]], [a[1], b[1]], color="black", lw=1.2, zorder=1)
    ax.add_patch(Circle((0, 0), 0.3, facecolor="white", edgecolor="black", lw=1.2, zorder=2))
    for x, y in vertices:
        ax.plot(x, y, "o", color="black", ms=4, zorder=3)
    for (x, y), i in leaf_pts:
        ax.text(x * 1.15, y * 1.15, f"$a_{{{i}}}$", ha="center", va="center", fontsize=9)
    ax.set_title(diagram_text(d).replace("_", r"\_"), fontsize=9)
    lim = max([1.5] + [abs(c) * 1.3 for p, _ in leaf_pts for c in p])
    ax.set_xlim(-lim, lim)
    ax.set_ylim(-lim, lim)
    ax.set_aspect("equal")
    ax.axis("off")
    fig.savefig(path, metadata=_META)
    plt.close(fig)


def plot_betti(ranks, path: str, title: str = "") -> None:
    """Bar chart of ``[(degree, betti), ...]``."""
    fig, ax = plt.subplots(figsize=(4, 3), dpi=100)
    degs = [d for d, _ in ranks]
    ax.bar(degs, [b for _, b in ranks], color="tab:blue")
    ax.set_xticks(degs)
    ax.set_xlabel("degree")
    ax.set_ylabel("betti number (Z/2)")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, metadata=_META)
    plt.close(fig)
