"""Files written by ``rdk classify --report DIR``.

The report has three parts: ``classes.csv`` with one row per double coset,
``classification.json`` with the full result, and ``partition.png``, which
draws the elements of Aut(A) as a grid of cells coloured by coset.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

from .classify import Classification
from .jsonio import to_plain, triple_to_json


def _label(i: int) -> str:
    return f"C{i}"


def classification_to_json(c: Classification) -> dict:
    return {
        "triple": triple_to_json(c.triple),
        "group": {"invariant_factors": list(c.moduli)},
        "aut_size": c.aut_size,
        "semisimple_image_size": len(c.semisimple_image),
        "tame_torus_size": len(c.tame_torus),
        "class_count": len(c.classes),
        "classes": [
            {
                "label": _label(i),
                "representative": to_plain(e.representative),
                "coset_size": len(e.coset),
                "coset": [to_plain(g) for g in e.coset],
                "datum": to_plain(e.datum),
            }
            for i, e in enumerate(c.classes)
        ],
    }


def write_csv(c: Classification, path: Path) -> None:
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["label", "coset_size", "representative", "rank", "roots"])
        for i, e in enumerate(c.classes):
            w.writerow([_label(i), len(e.coset), json.dumps(e.representative.tolist()), e.datum.rank, len(e.datum.roots)])


def plot_partition(c: Classification, path: Path) -> None:
    """Aut(A) in enumeration order, one cell per element, coloured by coset."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    order: list = []
    owner: dict = {}
    for i, e in enumerate(c.classes):
        for g in e.coset:
            owner[g] = i
            order.append(g)
    # cells are grouped coset by coset, each coset in enumeration order
    n = len(order)
    cols = max(1, min(n, 24))
    rows = (n + cols - 1) // cols
    grid = [[float("nan")] * cols for _ in range(rows)]
    for k, g in enumerate(order):
        grid[k // cols][k % cols] = owner[g]
    fig, ax = plt.subplots(figsize=(max(4.5, cols * 0.4 + 2.0), max(2.0, rows * 0.4 + 1.2)))
    cmap = plt.get_cmap("tab20", max(1, len(c.classes)))
    ax.pcolormesh(grid, cmap=cmap, vmin=-0.5, vmax=max(0, len(c.classes) - 1) + 0.5, edgecolors="white", linewidth=1.5)
    ax.set_aspect("equal")
    ax.invert_yaxis()
    ax.set_xticks([])
    ax.set_yticks([])
    name = c.triple.semisimple.name or f"rank {c.triple.semisimple.rank}"
    ax.set_title(f"{name}, torus rank {c.triple.torus_rank}\n{len(c.classes)} classes in |Aut(A)| = {c.aut_size}", fontsize=8)
    handles = [plt.Rectangle((0, 0), 1, 1, color=cmap(i)) for i in range(len(c.classes))]
    ax.legend(handles, [f"{_label(i)} ({len(e.coset)})" for i, e in enumerate(c.classes)], fontsize=6, loc="upper left", bbox_to_anchor=(1.01, 1.0))
    fig.tight_layout()
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)


def write_report(c: Classification, directory: str | Path) -> dict[str, Path]:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    paths = {"csv": d / "classes.csv", "json": d / "classification.json", "png": d / "partition.png"}
    write_csv(c, paths["csv"])
    paths["json"].write_text(json.dumps(classification_to_json(c), indent=2))
    plot_partition(c, paths["png"])
    return paths
