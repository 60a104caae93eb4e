"""Figures written next to the CSV reports (headless Agg backend)."""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

STYLE = {
    "font.size": 10,
    "axes.labelsize": 10,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
}


def _save(fig, path):
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_tails(rows: list[dict], path) -> str:
    """Rounds versus chain factor c: BFS eccentricity against cluster growing steps.

    ``rows`` carry ``c``, ``bfs_rounds`` and ``growing_steps`` (one per seed and c).
    """
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(5, 3.4))
        cs = sorted({r["c"] for r in rows})
        for key, label, marker in (("bfs_rounds", "BFS", "s"), ("growing_steps", "CLUSTER", "o")):
            med = []
            for c in cs:
                vals = sorted(r[key] for r in rows if r["c"] == c)
                med.append(vals[len(vals) // 2])
            ax.scatter([r["c"] for r in rows], [r[key] for r in rows], s=8, alpha=0.3, marker=marker)
            ax.plot(cs, med, marker=marker, label=label)
        ax.set_xlabel("chain length / diameter (c)")
        ax.set_ylabel("synchronous rounds")
        ax.legend(frameon=False)
        return _save(fig, path)


def plot_compare(rows: list[dict], path) -> str:
    """Max cluster radius per seed for CLUSTER and MPX at matched cluster counts."""
    with plt.rc_context(STYLE):
        fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(7, 3.2))
        for algo, marker in (("cluster", "o"), ("mpx", "s")):
            sel = [r for r in rows if r["algo"] == algo]
            ax1.plot([r["seed"] for r in sel], [r["radius"] for r in sel], marker=marker, label=algo)
            ax2.scatter([r["n_c"] for r in sel], [r["radius"] for r in sel], marker=marker, label=algo)
        ax1.set_xlabel("seed")
        ax1.set_ylabel("max cluster radius")
        ax2.set_xlabel("clusters")
        ax1.legend(frameon=False)
        return _save(fig, path)
