"""Seeded experiment grid: game x level x goal type x budget x agent x run.

One run plays every generated goal sequence for its cell as its own
episode (fresh initial state, shared rng), then measures bugs by replaying
the recorded actions through the shipped build.  A cell failure is
recorded as a row with an `error` field and marks the bundle partial
instead of aborting the grid, so a long sweep always produces a report.

Everything is reproducible from (config, seed_base): episode seeds are
seed_base + run index, and synthetic goal generation draws from a seed
derived from (seed_base, game, level).
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass

from ..engine.game import compile_game
from ..games import UnknownGame, level_index, load_game
from ..mcts.config import agent_preset, config_digest
from ..mcts.episode import play_episode
from ..oracle import replay_and_detect
from ..testmodel.goals import paper_faithful
from ..testmodel.graph import generate_baseline_goals, generate_synthetic_goals
from .config import ExperimentConfig

ROW_FIELDS = ("game", "level", "goal_type", "budget", "agent", "run", "seed",
              "config", "sequences", "moves", "status", "goals_done",
              "bugs_found", "bug_total", "bug_ids", "interactions", "error")


class MissingAsset(Exception):
    """The config references a game or level that does not exist."""


@dataclass(frozen=True)
class ReportBundle:
    config: ExperimentConfig
    rows: tuple          # one dict per grid cell run, ROW_FIELDS keys
    partial: bool        # True when any cell failed


def _goal_seed(seed_base: int, game: str, level_name: str) -> int:
    text = f"{seed_base}/{game}/{level_name}/goals"
    return int.from_bytes(hashlib.blake2b(text.encode(), digest_size=8).digest(), "big")


def _serialize_interactions(test) -> str:
    counts: dict = {}
    for key, n in test.executed.items():
        triple = f"{key.actor}/{key.actee}/{key.effect}"
        counts[triple] = counts.get(triple, 0) + n
    return ";".join(f"{k}={v}" for k, v in sorted(counts.items()))


def _merge_interactions(parts) -> str:
    counts: dict = {}
    for part in parts:
        if not part:
            continue
        for item in part.split(";"):
            k, v = item.rsplit("=", 1)
            counts[k] = counts.get(k, 0) + int(v)
    return ";".join(f"{k}={v}" for k, v in sorted(counts.items()))


def _run_cell(game, sequences, cfg, seed, max_moves):
    """One seeded run: every sequence as an episode; bug union via replay."""
    rng = random.Random(seed)
    bugs: set = set()
    moves = 0
    statuses = []
    done = True
    interactions = []
    for seq in sequences:
        result = play_episode(game, seq, cfg, rng, max_moves=max_moves)
        report = replay_and_detect(game, result.actions, result.step_events)
        bugs.update(report.bugs)
        moves += report.moves
        statuses.append(report.final_status)
        done = done and result.goals_done
        interactions.append(_serialize_interactions(result.test))
    return bugs, moves, "+".join(statuses), done, _merge_interactions(interactions)


def run_experiment(config: ExperimentConfig, progress=None) -> ReportBundle:
    bundles = {}
    for name in config.games:
        try:
            bundles[name] = load_game(name)
        except (UnknownGame, OSError) as e:
            raise MissingAsset(str(e)) from None

    rows = []
    partial = False
    for game_name in config.games:
        bundle = bundles[game_name]
        if config.levels:
            try:
                picked = [(n, level_index(bundle, n)) for n in config.levels]
            except UnknownGame as e:
                raise MissingAsset(str(e)) from None
        else:
            picked = [(i + 1, i) for i in range(len(bundle.levels))]

        for level_label, li in picked:
            level = bundle.levels[li]
            game = compile_game(bundle.shipped, level)
            goal_rng_seed = _goal_seed(config.seed_base, bundle.name,
                                       bundle.level_names[li])
            goal_sets = {}
            for goal_type in config.goal_types:
                if goal_type == "baseline":
                    seqs = generate_baseline_goals(bundle.graph, config.coverage)
                else:
                    seqs = generate_synthetic_goals(
                        bundle.graph, bundle.golden, config.coverage,
                        rng=random.Random(goal_rng_seed))
                if config.paper_faithful:
                    seqs = tuple(paper_faithful(s) for s in seqs)
                goal_sets[goal_type] = seqs

            for goal_type in config.goal_types:
                sequences = goal_sets[goal_type]
                for budget in config.budgets:
                    for agent in config.agents:
                        cfg = agent_preset(agent, iterations=budget.iterations,
                                           budget_ms=budget.budget_ms)
                        for run in range(config.runs):
                            seed = config.seed_base + run
                            row = {
                                "game": bundle.name,
                                "level": level_label,
                                "goal_type": goal_type,
                                "budget": budget.label,
                                "agent": agent,
                                "run": run,
                                "seed": seed,
                                "config": config_digest(cfg),
                                "sequences": len(sequences),
                                "moves": 0,
                                "status": "",
                                "goals_done": False,
                                "bugs_found": 0,
                                "bug_total": len(bundle.catalog),
                                "bug_ids": "",
                                "interactions": "",
                                "error": "",
                            }
                            try:
                                bugs, moves, status, done, inter = _run_cell(
                                    game, sequences, cfg, seed, config.max_moves)
                                row.update(
                                    moves=moves, status=status, goals_done=done,
                                    bugs_found=len(bugs),
                                    bug_ids=";".join(sorted(bugs)),
                                    interactions=inter,
                                )
                            except Exception as e:   # crash-free grid
                                row["error"] = f"{type(e).__name__}: {e}"
                                partial = True
                            rows.append(row)
                            if progress is not None:
                                progress(row)
    return ReportBundle(config, tuple(rows), partial)
