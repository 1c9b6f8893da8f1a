"""Ground truth for bug detection runs.

replay_and_detect re-executes a recorded action list through a compiled
game and collects the bug ids its events witness; the engine is
deterministic, so recorded and replayed events must agree whenever the
caller supplies them for cross-checking.

reachable_bugs answers "which planted bugs can any play reach within k
moves" by breadth-first search over game states.  Only movement actions
are expanded: `use` and `nil` never touch rule resolution or sprite
counts, so they cannot witness anything, and the dedup key ignores the
tick and facing they change.  Exhaustive search is the measuring stick
agent runs are compared against.
"""

from __future__ import annotations

from typing import NamedTuple

from .engine.keys import raw_state_key
from .engine.types import MOVE_ACTIONS, RUNNING


class TrajectoryMismatch(Exception):
    """Replay diverged from the recorded episode."""


class BudgetExceeded(Exception):
    """Exhaustive search hit its expansion cap before finishing."""


class EmptyCatalog(Exception):
    """No planted bugs to aggregate against."""


class BugReport(NamedTuple):
    bugs: frozenset
    moves: int
    final_status: str


class BugStats(NamedTuple):
    total: int
    found: frozenset
    combined_pct: float        # share of the catalog found by any report
    mean_report_pct: float     # mean per-report share


def replay_and_detect(game, actions, expected_step_events=None) -> BugReport:
    """Re-run `actions` from the initial state, collecting witnessed bugs.

    When `expected_step_events` is given (one event tuple per action) the
    replayed events are compared step by step.
    """
    state = game.initial_state()
    found = set()
    for i, action in enumerate(actions):
        if state.status != RUNNING:
            raise TrajectoryMismatch(
                f"state is {state.status!r} at step {i} with actions remaining")
        state, events = game.step(state, action)
        if expected_step_events is not None and tuple(events) != tuple(expected_step_events[i]):
            raise TrajectoryMismatch(f"event divergence at step {i} ({action!r})")
        for ev in events:
            if ev.witness is not None:
                found.add(ev.witness)
    return BugReport(frozenset(found), len(actions), state.status)


def reachable_bugs(game, max_depth: int, max_expansions: int = 5_000_000) -> frozenset:
    """Bug ids witnessable within `max_depth` moves of the initial state."""
    start = game.initial_state()
    seen = {raw_state_key(start, game)}
    frontier = [start]
    found = set()
    expansions = 0
    for _ in range(max_depth):
        next_frontier = []
        for state in frontier:
            for action in MOVE_ACTIONS:
                expansions += 1
                if expansions > max_expansions:
                    raise BudgetExceeded(
                        f"exceeded {max_expansions} expansions at {len(seen)} states")
                nxt, events = game.step(state, action)
                for ev in events:
                    if ev.witness is not None:
                        found.add(ev.witness)
                if nxt.status != RUNNING:
                    continue
                key = raw_state_key(nxt, game)
                if key not in seen:
                    seen.add(key)
                    next_frontier.append(nxt)
        if not next_frontier:
            break
        frontier = next_frontier
    return frozenset(found)


REPORT_FORMAT_LINE = "playtest-bugreport v1"


def bug_report_text(report: BugReport) -> str:
    return "\n".join([
        REPORT_FORMAT_LINE,
        f"moves {report.moves}",
        f"status {report.final_status}",
        f"bugs {';'.join(sorted(report.bugs))}",
    ]) + "\n"


def parse_bug_report(text: str) -> BugReport:
    lines = [l for l in text.splitlines() if l]
    if not lines or lines[0] != REPORT_FORMAT_LINE:
        raise ValueError(f"expected header {REPORT_FORMAT_LINE!r}")
    fields = dict(line.split(" ", 1) if " " in line else (line, "")
                  for line in lines[1:])
    bugs = frozenset(b for b in fields.get("bugs", "").split(";") if b)
    return BugReport(bugs, int(fields["moves"]), fields["status"])


def aggregate_bug_stats(reports, catalog) -> BugStats:
    """Catalog coverage of a set of reports.  A bug triggered any number of
    times, in any number of reports, counts once toward the combined share."""
    ids = frozenset(m.bug_id if hasattr(m, "bug_id") else str(m) for m in catalog)
    if not ids:
        raise EmptyCatalog("no planted bugs in catalog")
    reports = list(reports)
    found = set()
    shares = []
    for report in reports:
        bugs = report.bugs if isinstance(report, BugReport) else frozenset(report)
        unknown = bugs - ids
        if unknown:
            raise ValueError(f"reported bug ids not in catalog: {sorted(unknown)}")
        found.update(bugs)
        shares.append(len(bugs) / len(ids))
    mean_share = sum(shares) / len(shares) if shares else 0.0
    return BugStats(len(ids), frozenset(found),
                    100.0 * len(found) / len(ids), 100.0 * mean_share)
