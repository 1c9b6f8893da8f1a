"""Episode driver and the trajectory file format.

An episode runs one agent on one compiled game until the game ends, the
goal sequence is exhausted, or the move cap is hit.  The recorded action
list is the exchange format: replaying it through the same game is
deterministic, so trajectories round-trip bit-exactly through the v1 file
format below.

    playtest-trajectory v1
    game <name>
    level <label>
    agent <label>
    seed <int>
    config <digest>
    ---
    <one action per line>
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from ..engine.types import RUNNING
from ..testmodel.rewards import EvalContext
from ..testmodel.teststate import TestState
from .search import best_action, re_root_tree, search


class SearchTiming(NamedTuple):
    elapsed_ms: float
    max_iter_ms: float
    iterations: int


class EpisodeResult(NamedTuple):
    actions: tuple
    step_events: tuple      # one event tuple per action
    final_state: object
    test: TestState
    goal_index: int
    goals_done: bool
    timings: tuple          # one SearchTiming per action


def play_episode(game, seq, cfg, rng, max_moves: int = 0) -> EpisodeResult:
    """Search-act loop from the initial state.

    Goals advance after each committed move; the episode stops when the
    game ends, every goal is complete, or the cap (the game's own when
    `max_moves` is 0) runs out.
    """
    ctx = EvalContext(seq, game.level)
    state = game.initial_state()
    test = TestState()
    gi = seq.active_index
    cap = max_moves if max_moves > 0 else game.move_cap

    actions = []
    step_events = []
    timings = []
    tree = None
    while state.status == RUNNING and gi < len(seq.goals) and len(actions) < cap:
        tree = search(game, state, test, gi, ctx, cfg, rng, tree=tree)
        action = best_action(tree, game, state, rng)
        state, events = game.step(state, action)
        test.apply(events, seq.goals[gi])
        gi = ctx.advance_index(test, gi)
        actions.append(action)
        step_events.append(events)
        timings.append(SearchTiming(tree.elapsed_ms, tree.max_iter_ms, tree.iterations))
        tree = re_root_tree(tree, action) if cfg.tree_reuse else None
    return EpisodeResult(tuple(actions), tuple(step_events), state, test, gi,
                         gi >= len(seq.goals), tuple(timings))


# ── Trajectory files ─────────────────────────────────────────────────────────

FORMAT_LINE = "playtest-trajectory v1"


class TrajectoryFormatError(Exception):
    pass


@dataclass(frozen=True)
class Trajectory:
    game: str
    level: str
    agent: str
    seed: int
    config: str
    actions: tuple


def trajectory_text(traj: Trajectory) -> str:
    lines = [
        FORMAT_LINE,
        f"game {traj.game}",
        f"level {traj.level}",
        f"agent {traj.agent}",
        f"seed {traj.seed}",
        f"config {traj.config}",
        "---",
    ]
    lines.extend(traj.actions)
    return "\n".join(lines) + "\n"


def parse_trajectory(text: str) -> Trajectory:
    lines = text.splitlines()
    if not lines or lines[0] != FORMAT_LINE:
        raise TrajectoryFormatError(f"expected header {FORMAT_LINE!r}")
    fields = {}
    body_at = None
    for i, line in enumerate(lines[1:], start=1):
        if line == "---":
            body_at = i + 1
            break
        try:
            name, value = line.split(" ", 1)
        except ValueError:
            raise TrajectoryFormatError(f"bad header line {i + 1}: {line!r}") from None
        fields[name] = value
    if body_at is None:
        raise TrajectoryFormatError("missing --- separator")
    missing = {"game", "level", "agent", "seed", "config"} - set(fields)
    if missing:
        raise TrajectoryFormatError(f"missing header fields: {sorted(missing)}")
    try:
        seed = int(fields["seed"])
    except ValueError:
        raise TrajectoryFormatError(f"bad seed {fields['seed']!r}") from None
    actions = tuple(line for line in lines[body_at:] if line)
    return Trajectory(fields["game"], fields["level"], fields["agent"],
                      seed, fields["config"], actions)
