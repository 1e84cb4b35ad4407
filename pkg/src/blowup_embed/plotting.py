"""Figures for sweep results, written next to the CSV tables."""

from __future__ import annotations

from collections import Counter
from pathlib import Path
from typing import Dict, List, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.ticker import MaxNLocator  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "axes.titlesize": 10,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "savefig.dpi": 150,
    "savefig.bbox": "tight",
}

OUTCOME_COLORS = {
    "success": "#3a7d44",
    "phase1-stuck": "#d08c2a",
    "phase2-hall-failure": "#b23a48",
    "preprocessing-failure": "#6c6f7f",
    "error": "#222222",
}

GOLDEN = (5**0.5 - 1) / 2


def figure_size(width: float = 5.0) -> tuple:
    return (width, width * GOLDEN)


def _point_labels(summary: Sequence[dict]) -> List[str]:
    """Short x-tick labels naming only the axes that vary."""
    axes = ["N", "d", "delta", "Delta", "overrides"]
    varying = [a for a in axes if len({str(s[a]) for s in summary}) > 1]
    if not varying:
        return [s["point"] for s in summary]
    return ["\n".join(f"{a}={s[a]}" for a in varying) for s in summary]


def _save(fig, path: Path) -> str:
    # no timestamp metadata, so identical inputs give identical files
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)
    return str(path)


def plot_success(summary: Sequence[dict], path: Path) -> str:
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=figure_size())
        labels = _point_labels(summary)
        rates = [float(s["success_rate"]) for s in summary]
        ax.bar(range(len(rates)), rates, color=OUTCOME_COLORS["success"], width=0.6)
        for k, s in enumerate(summary):
            ax.text(k, rates[k] + 0.02, f"{s['successes']}/{s['runs']}", ha="center", va="bottom")
        ax.set_xticks(range(len(rates)))
        ax.set_xticklabels(labels)
        ax.set_ylim(0, 1.12)
        ax.set_ylabel("success rate")
        ax.set_title("embedding success per sweep point")
        return _save(fig, path)


def plot_outcomes(rows: Sequence[dict], summary: Sequence[dict], path: Path) -> str:
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=figure_size())
        points = [s["point"] for s in summary]
        counts = {p: Counter(r["outcome"] for r in rows if r["point"] == p) for p in points}
        kinds = [k for k in OUTCOME_COLORS if any(c[k] for c in counts.values())]
        bottom = [0] * len(points)
        for kind in kinds:
            heights = [counts[p][kind] for p in points]
            ax.bar(range(len(points)), heights, bottom=bottom, width=0.6, label=kind, color=OUTCOME_COLORS[kind])
            bottom = [b + h for b, h in zip(bottom, heights)]
        ax.set_xticks(range(len(points)))
        ax.set_xticklabels(_point_labels(summary))
        ax.set_ylabel("runs")
        ax.yaxis.set_major_locator(MaxNLocator(integer=True))
        ax.legend(frameon=False, loc="upper left", bbox_to_anchor=(1.0, 1.0))
        ax.set_title("outcomes")
        return _save(fig, path)


def plot_min_H(rows: Sequence[dict], summary: Sequence[dict], path: Path) -> str:
    """Smallest candidate set seen during Phase 1, one dot per run."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=figure_size())
        for k, s in enumerate(summary):
            mine = [r for r in rows if r["point"] == s["point"] and r.get("min_H_set") not in ("", None)]
            ys = [int(r["min_H_set"]) for r in mine]
            colors = [OUTCOME_COLORS.get(r["outcome"], "#222222") for r in mine]
            xs = [k + 0.25 * ((j % 9) / 8 - 0.5) for j in range(len(ys))]
            ax.scatter(xs, ys, s=10, c=colors, linewidths=0)
        ax.set_xticks(range(len(summary)))
        ax.set_xticklabels(_point_labels(summary))
        ax.set_ylabel("min |H| during Phase 1")
        ax.set_title("smallest candidate set")
        return _save(fig, path)


def plot_experiment(rows: Sequence[dict], summary: Sequence[dict], out_dir) -> Dict[str, str]:
    out = Path(out_dir)
    return {
        "plot_success": plot_success(summary, out / "success_rate.png"),
        "plot_outcomes": plot_outcomes(rows, summary, out / "outcomes.png"),
        "plot_min_H": plot_min_H(rows, summary, out / "min_H.png"),
    }
