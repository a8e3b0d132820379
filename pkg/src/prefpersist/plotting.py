"""Matplotlib figures for CLI reports, written to files (PNG, SVG or PDF by suffix)."""

from __future__ import annotations

from collections import Counter
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.ticker import MaxNLocator  # noqa: E402

from .logics import LogicHandle  # noqa: E402
from .syntax import Formula, to_text  # noqa: E402

_VERDICT_COLORS = {"true": "#4c72b0", "false": "#dd8452", "unknown": "#8c8c8c", "error": "#c44e52"}


def _save(fig, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    # fixed salt and no timestamp keep output byte-stable
    with matplotlib.rc_context({"svg.hashsalt": "prefpersist"}):
        fig.savefig(path, metadata={"Date": None} if path.suffix.lower() in (".svg", ".pdf") else None)
    plt.close(fig)
    return path


def route_figure(rows: Sequence, path: str | Path, title: str = "Routes taken") -> Path:
    """Stacked bars: number of queries per route, split by verdict."""
    counts: Counter = Counter()
    for r in rows:
        if r.report is None:
            counts[("error", "error")] += 1
        else:
            counts[(r.report.route.value, r.report.verdict)] += 1
    routes = sorted({k[0] for k in counts})
    verdicts = [v for v in _VERDICT_COLORS if any(k[1] == v for k in counts)]
    fig, ax = plt.subplots(figsize=(6, 3.5))
    bottom = np.zeros(len(routes))
    for v in verdicts:
        vals = np.array([counts[(r, v)] for r in routes], dtype=float)
        ax.bar(routes, vals, bottom=bottom, label=v, color=_VERDICT_COLORS[v])
        bottom += vals
    ax.set_ylabel("queries")
    ax.yaxis.set_major_locator(MaxNLocator(integer=True))
    ax.set_title(title)
    ax.legend(frameon=False)
    ax.tick_params(axis="x", labelrotation=20)
    fig.tight_layout()
    return _save(fig, path)


def persistence_figure(logic: LogicHandle, f: Formula, path: str | Path, max_models: int = 64) -> Path:
    """The preference order with models of ``f`` marked and persistence violations shaded."""
    n = min(logic.size, max_models)
    sat = logic.sat(f)[:n]
    leq = logic.leq[:n, :n]
    img = np.zeros((n, n))
    img[leq | leq.T] = 1.0
    down = sat[:, None] & leq.T & ~sat[None, :]
    up = sat[:, None] & leq & ~sat[None, :]
    img[down] = 2.0
    img[up & ~down] = 3.0
    cmap = matplotlib.colors.ListedColormap(["white", "#d0d0d0", "#dd8452", "#4c72b0"])
    fig, ax = plt.subplots(figsize=(5.5, 6))
    ax.imshow(img, cmap=cmap, vmin=0, vmax=3, interpolation="nearest")
    marks = np.flatnonzero(sat)
    ax.scatter(marks, marks, s=12, c="black", marker="o", label="model of formula")
    ax.set_xlabel("model n")
    ax.set_ylabel("model m")
    label = to_text(f)
    ax.set_title(f"{logic.name}: {label[:48]}" + ("..." if len(label) > 48 else ""), fontsize=9)
    handles = [
        matplotlib.patches.Patch(color="#d0d0d0", label="comparable"),
        matplotlib.patches.Patch(color="#dd8452", label="downward violation"),
        matplotlib.patches.Patch(color="#4c72b0", label="upward violation"),
    ]
    ax.legend(handles=handles + [ax.collections[0]], fontsize=7, loc="upper center",
              bbox_to_anchor=(0.5, -0.12), ncol=2, frameon=False)
    fig.tight_layout()
    return _save(fig, path)


def persistence_summary_figure(rows: Sequence[tuple[str, bool, bool]], path: str | Path) -> Path:
    """Counts of formulas per persistence combination (rows of (text, down, up))."""
    labels = ["both", "downward only", "upward only", "neither"]
    counts = Counter()
    for _, d, u in rows:
        counts[labels[0] if d and u else labels[1] if d else labels[2] if u else labels[3]] += 1
    fig, ax = plt.subplots(figsize=(5, 3))
    ax.bar(labels, [counts[k] for k in labels], color=["#55a868", "#dd8452", "#4c72b0", "#8c8c8c"])
    ax.set_ylabel("formulas")
    ax.yaxis.set_major_locator(MaxNLocator(integer=True))
    ax.set_title("Persistence of sampled formulas")
    fig.tight_layout()
    return _save(fig, path)
