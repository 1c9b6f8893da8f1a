"""Report files: per-run table, grouped summary, figures.

Files are pure functions of the bundle: rows keep grid order, JSON twins
sort their keys, and nothing timestamps itself, so identical runs write
byte-identical reports.

Summary groups are (game, goal_type, budget, agent) across levels and
runs.  Bug percentage, sequence length, and cross entropy are reported as
mean with 95% bounds; cross entropy compares each run's interaction
distribution to its group's pooled distribution (no human reference data
ships with the package, so similarity is measured against the consensus).
"""

from __future__ import annotations

import csv
import dataclasses
import json
from pathlib import Path

from ..metrics import EmptyReference, TooFewSamples, ci95, cross_entropy
from .runner import ROW_FIELDS, ReportBundle

SUMMARY_FIELDS = ("game", "goal_type", "budget", "agent", "runs",
                  "bug_pct_mean", "bug_pct_lo", "bug_pct_hi", "combined_pct",
                  "length_mean", "length_lo", "length_hi",
                  "ce_mean", "ce_lo", "ce_hi")


def _parse_interactions(text: str) -> dict:
    counts: dict = {}
    if not text:
        return counts
    for item in text.split(";"):
        name, value = item.rsplit("=", 1)
        actor, actee, effect = name.split("/")
        counts[(actor, actee, effect)] = int(value)
    return counts


def _interval(values) -> tuple:
    mean = sum(values) / len(values)
    try:
        lo, hi = ci95(values)
    except TooFewSamples:
        lo = hi = mean
    return mean, lo, hi


def _fmt(x: float) -> str:
    return f"{x:.4f}"


def summarize(bundle: ReportBundle) -> list:
    """Grouped summary rows from the per-run rows (error rows excluded)."""
    groups: dict = {}
    for row in bundle.rows:
        if row["error"]:
            continue
        key = (row["game"], row["goal_type"], row["budget"], row["agent"])
        groups.setdefault(key, []).append(row)

    out = []
    for key in sorted(groups):
        rows = groups[key]
        game, goal_type, budget, agent = key
        pcts = [100.0 * r["bugs_found"] / r["bug_total"] if r["bug_total"] else 0.0
                for r in rows]
        lengths = [r["moves"] for r in rows]
        combined = set()
        pooled: dict = {}
        per_run = []
        for r in rows:
            if r["bug_ids"]:
                combined.update(r["bug_ids"].split(";"))
            counts = _parse_interactions(r["interactions"])
            per_run.append(counts)
            for triple, n in counts.items():
                pooled[triple] = pooled.get(triple, 0) + n
        ces = []
        for counts in per_run:
            try:
                ces.append(cross_entropy(pooled, counts))
            except EmptyReference:
                pass
        total = rows[0]["bug_total"]
        p_mean, p_lo, p_hi = _interval(pcts)
        l_mean, l_lo, l_hi = _interval(lengths)
        c_mean, c_lo, c_hi = _interval(ces) if ces else (0.0, 0.0, 0.0)
        out.append({
            "game": game, "goal_type": goal_type, "budget": budget,
            "agent": agent, "runs": len(rows),
            "bug_pct_mean": _fmt(p_mean), "bug_pct_lo": _fmt(p_lo),
            "bug_pct_hi": _fmt(p_hi),
            "combined_pct": _fmt(100.0 * len(combined) / total if total else 0.0),
            "length_mean": _fmt(l_mean), "length_lo": _fmt(l_lo),
            "length_hi": _fmt(l_hi),
            "ce_mean": _fmt(c_mean), "ce_lo": _fmt(c_lo), "ce_hi": _fmt(c_hi),
        })
    return out


def _write_csv(path: Path, fields, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(fields))
        writer.writeheader()
        writer.writerows(rows)


def write_report(bundle: ReportBundle, out_dir, figures: bool = True) -> dict:
    """Write runs.csv/json, summary.csv/json, and figures.  Returns paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {}

    _write_csv(out / "runs.csv", ROW_FIELDS, bundle.rows)
    paths["runs_csv"] = out / "runs.csv"

    doc = {
        "schema": 1,
        "partial": bundle.partial,
        "config": dataclasses.asdict(bundle.config),
        "rows": list(bundle.rows),
    }
    (out / "runs.json").write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    paths["runs_json"] = out / "runs.json"

    summary = summarize(bundle)
    _write_csv(out / "summary.csv", SUMMARY_FIELDS, summary)
    paths["summary_csv"] = out / "summary.csv"
    (out / "summary.json").write_text(
        json.dumps({"schema": 1, "groups": summary}, sort_keys=True, indent=2) + "\n")
    paths["summary_json"] = out / "summary.json"

    if figures:
        from .figures import render_figures
        paths["figures"] = tuple(render_figures(summary, out))
    return paths


def load_report_bundle(path) -> ReportBundle:
    """Rebuild a bundle from a runs.json written by write_report."""
    from .config import Budget, ExperimentConfig

    doc = json.loads(Path(path).read_text())
    raw = doc["config"]
    config = ExperimentConfig(
        games=tuple(raw["games"]),
        agents=tuple(raw["agents"]),
        goal_types=tuple(raw["goal_types"]),
        levels=tuple(raw["levels"]),
        budgets=tuple(Budget(**b) for b in raw["budgets"]),
        runs=raw["runs"],
        seed_base=raw["seed_base"],
        paper_faithful=raw["paper_faithful"],
        coverage=raw["coverage"],
        max_moves=raw["max_moves"],
    )
    return ReportBundle(config, tuple(doc["rows"]), doc["partial"])
