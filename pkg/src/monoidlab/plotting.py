"""Hasse diagrams rendered to image files with matplotlib (Agg backend)."""

from __future__ import annotations

from pathlib import Path
from typing import Iterable

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .lattices import FiniteLattice, Partition, is_finer  # noqa: E402


def _levels(lat: FiniteLattice) -> list[int]:
    n = len(lat)
    level = [0] * n
    for a in sorted(range(n), key=lambda i: int(lat.leq[:, i].sum())):
        below = [b for b in range(n) if b != a and lat.leq[b, a]]
        level[a] = max((level[b] + 1 for b in below), default=0)
    return level


def hasse_positions(lat: FiniteLattice) -> dict[int, tuple[float, float]]:
    level = _levels(lat)
    rows: dict[int, list[int]] = {}
    for a, lv in enumerate(level):
        rows.setdefault(lv, []).append(a)
    pos = {}
    for lv, items in rows.items():
        k = len(items)
        for i, a in enumerate(items):
            pos[a] = (i - (k - 1) / 2, float(lv))
    return pos


def draw_hasse(ax, lat: FiniteLattice, highlight: Iterable[str] = (),
               labels: dict[str, str] | None = None, flip: bool = False,
               fontsize: int = 8):
    pos = hasse_positions(lat)
    if flip:
        top = max(y for _, y in pos.values())
        pos = {a: (x, top - y) for a, (x, y) in pos.items()}
    hl = set(highlight)
    for a, b in lat.covers():
        (x0, y0), (x1, y1) = pos[a], pos[b]
        both = lat.elements[a] in hl and lat.elements[b] in hl
        ax.plot([x0, x1], [y0, y1], color="C3" if both else "0.6",
                lw=1.6 if both else 0.8, zorder=1)
    for a, (x, y) in pos.items():
        name = lat.elements[a]
        ax.scatter([x], [y], s=40, color="C3" if name in hl else "k", zorder=2)
        text = labels.get(name, name) if labels else name
        ax.annotate(text, (x, y), xytext=(0, 6), textcoords="offset points",
                    ha="center", fontsize=fontsize)
    ax.set_axis_off()
    xs = [x for x, _ in pos.values()]
    ax.set_xlim(min(xs) - 1, max(xs) + 1)


def save_lattice(lat: FiniteLattice, path: str | Path, highlight: Iterable[str] = (),
                 title: str | None = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    width = max(4.0, 0.9 * max(np.bincount(_levels(lat))))
    fig, ax = plt.subplots(figsize=(width, 4))
    draw_hasse(ax, lat, highlight)
    if title:
        ax.set_title(title, fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)
    return path


def partition_order(partitions: list[Partition]) -> FiniteLattice:
    n = len(partitions)
    rel = np.array([[is_finer(partitions[a], partitions[b]) for b in range(n)]
                    for a in range(n)], dtype=bool)
    return FiniteLattice(tuple(p.short() for p in partitions), rel)


def save_fiber_figure(partitions: list[Partition], fiber_sizes: dict[str, int],
                      path: str | Path, title: str) -> Path:
    """Eq(W) next to the same poset upside down, the reversed interval of
    varieties; right-hand labels give the number of derivable pairs."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lat = partition_order(partitions)
    width = max(3.0, 0.9 * max(np.bincount(_levels(lat))))
    fig, (left, right) = plt.subplots(1, 2, figsize=(2 * width + 1, 4))
    draw_hasse(left, lat)
    left.set_title("partitions (refinement order)", fontsize=9)
    labels = {p.short(): f"{p.short()} [{fiber_sizes[p.short()]}]" for p in partitions}
    draw_hasse(right, lat, labels=labels, flip=True)
    right.set_title("fiber systems (inclusion of varieties)", fontsize=9)
    fig.suptitle(title, fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)
    return path
