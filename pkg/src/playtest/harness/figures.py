"""Figures for report directories: grouped bar charts with 95% whiskers.

Rendering is headless (Agg) and deterministic: fixed ordering, fixed
metadata, no timestamps in the PNG.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

_PNG_METADATA = {"Software": "playtest"}


def _grouped_bars(ax, rows, mean_key, lo_key, hi_key, title, ylabel):
    budgets = sorted({r["budget"] for r in rows})
    agents = sorted({r["agent"] for r in rows})
    width = 0.8 / max(len(budgets), 1)
    by_cell = {(r["agent"], r["budget"]): r for r in rows}
    for bi, budget in enumerate(budgets):
        xs, means, errs_lo, errs_hi = [], [], [], []
        for ai, agent in enumerate(agents):
            row = by_cell.get((agent, budget))
            if row is None:
                continue
            mean = float(row[mean_key])
            xs.append(ai + bi * width)
            means.append(mean)
            errs_lo.append(max(mean - float(row[lo_key]), 0.0))
            errs_hi.append(max(float(row[hi_key]) - mean, 0.0))
        ax.bar(xs, means, width=width * 0.9, label=budget,
               yerr=(errs_lo, errs_hi), capsize=3)
    ax.set_xticks([i + 0.4 - width / 2 for i in range(len(agents))])
    ax.set_xticklabels(agents)
    ax.set_title(title)
    ax.set_ylabel(ylabel)
    if len(budgets) > 1:
        ax.legend(title="budget", fontsize="small")


def render_figures(summary_rows, out_dir) -> list:
    """One bug-percentage and one length chart per (game, goal type)."""
    out = Path(out_dir)
    written = []
    pairs = sorted({(r["game"], r["goal_type"]) for r in summary_rows})
    for game, goal_type in pairs:
        rows = [r for r in summary_rows
                if r["game"] == game and r["goal_type"] == goal_type]
        for mean_key, lo_key, hi_key, label, stem in (
            ("bug_pct_mean", "bug_pct_lo", "bug_pct_hi",
             "% of planted bugs found", "bugs"),
            ("length_mean", "length_lo", "length_hi",
             "moves per run", "lengths"),
        ):
            fig, ax = plt.subplots(figsize=(6, 4))
            _grouped_bars(ax, rows, mean_key, lo_key, hi_key,
                          f"{game} / {goal_type}", label)
            fig.tight_layout()
            path = out / f"{game}_{goal_type}_{stem}.png"
            fig.savefig(path, metadata=_PNG_METADATA)
            plt.close(fig)
            written.append(path)
    return written
