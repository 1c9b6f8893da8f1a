"""Test goals: weighted interaction features grouped into goal sequences.

A feature is a matcher over interaction keys plus a weight and a criterion
(the fraction of matching instances that must be touched).  A goal is a
named feature set with a dampening factor for already-satisfied features;
a sequence orders goals and carries the evaluation parameters.

Goal files hold one sequence: an optional `params` line, then one block per
goal (`goal <name> [d=<dampening>]` followed by `matcher weight criterion`
lines).  Matchers read `actor/actee/effect`, `*` for any, `-` for an empty
participant, with an optional `@x,y` cell pin.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

from .teststate import InteractionKey


class GoalFormatError(Exception):
    def __init__(self, line: int, msg: str):
        super().__init__(f"line {line}: {msg}")
        self.line = line


class SequenceExhausted(Exception):
    """advance_goal() was called on a sequence with no active goal left."""


@dataclass(frozen=True)
class Matcher:
    actor: Optional[str] = None    # None matches anything
    actee: Optional[str] = None
    effect: Optional[str] = None
    cell: Optional[tuple] = None

    def matches(self, key) -> bool:
        if self.actor is not None and key.actor != self.actor:
            return False
        if self.actee is not None and key.actee != self.actee:
            return False
        if self.effect is not None and key.effect != self.effect:
            return False
        if self.cell is not None and key.cell != self.cell:
            return False
        return True

    def text(self) -> str:
        def part(p):
            if p is None:
                return "*"
            return p if p != "" else "-"
        s = f"{part(self.actor)}/{part(self.actee)}/{part(self.effect)}"
        if self.cell is not None:
            s += f"@{self.cell[0]},{self.cell[1]}"
        return s


def parse_matcher(text: str, line: int = 0) -> Matcher:
    cell = None
    if "@" in text:
        text, cell_part = text.split("@", 1)
        try:
            x, y = cell_part.split(",")
            cell = (int(x), int(y))
        except ValueError:
            raise GoalFormatError(line, f"bad cell pin {cell_part!r}") from None
    parts = text.split("/")
    if len(parts) != 3:
        raise GoalFormatError(line, f"matcher {text!r} must be actor/actee/effect")

    def decode(p):
        if p == "*":
            return None
        if p == "-":
            return ""
        return p
    actor, actee, effect = (decode(p) for p in parts)
    return Matcher(actor, actee, effect, cell)


@dataclass(frozen=True)
class Feature:
    matcher: Matcher
    weight: float = 1.0
    criterion: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.criterion <= 1.0:
            raise ValueError(f"criterion must be in (0, 1], got {self.criterion}")


@dataclass(frozen=True)
class TestGoal:
    name: str
    features: tuple = ()
    dampening: float = 0.1

    def __post_init__(self):
        if not 0.0 <= self.dampening <= 1.0:
            raise ValueError(f"dampening must be in [0, 1], got {self.dampening}")
        # Cached: the ids are read on every step evaluation.
        object.__setattr__(self, "_feature_ids",
                           tuple(f"{self.name}#{i}" for i in range(len(self.features))))
        object.__setattr__(self, "_cell_free",
                           all(f.matcher.cell is None for f in self.features))
        object.__setattr__(self, "_triple_cache", {})

    @property
    def feature_ids(self) -> tuple:
        return self._feature_ids

    def match_indices(self, actor: str, actee: str, effect: str):
        """Indices of features matching the triple, or None when any feature
        matches on cell and the per-event matcher walk must run instead.

        The triple space is tiny (classes x classes x effects), so memoizing
        keeps step evaluation flat in the number of features.
        """
        if not self._cell_free:
            return None
        cache = self._triple_cache
        triple = (actor, actee, effect)
        hit = cache.get(triple)
        if hit is None:
            key = InteractionKey(actor, actee, effect, None)
            hit = tuple(i for i, f in enumerate(self.features)
                        if f.matcher.matches(key))
            cache[triple] = hit
        return hit


@dataclass(frozen=True)
class GoalSequence:
    goals: tuple
    active_index: int = 0
    criteria_threshold: float = 0.01     # fulfillment below this reads as 0
    completion_threshold: float = 1.0    # fulfillment needed to advance
    goal_reward: float = 10.0
    unknown_feature_weight: float = -1.0

    def __post_init__(self):
        names = [g.name for g in self.goals]
        if len(set(names)) != len(names):
            raise ValueError("goal names must be unique within a sequence")
        if not 0.0 < self.criteria_threshold <= 1.0:
            raise ValueError("criteria_threshold must be in (0, 1]")
        if not 0.0 < self.completion_threshold <= 1.0:
            raise ValueError("completion_threshold must be in (0, 1]")
        if not 0 <= self.active_index <= len(self.goals):
            raise ValueError("active_index out of range")

    @property
    def done(self) -> bool:
        return self.active_index >= len(self.goals)

    @property
    def active(self):
        return self.goals[self.active_index]

    def advanced(self) -> "GoalSequence":
        if self.done:
            raise SequenceExhausted("no active goal to advance past")
        return replace(self, active_index=self.active_index + 1)


def paper_faithful(seq: GoalSequence) -> GoalSequence:
    """Advance goals at the criteria threshold instead of full fulfillment."""
    return replace(seq, completion_threshold=seq.criteria_threshold)


# ── Goal file format ─────────────────────────────────────────────────────────

_PARAM_FIELDS = {
    "criteria_threshold": "criteria_threshold",
    "completion_threshold": "completion_threshold",
    "goal_reward": "goal_reward",
    "unknown_weight": "unknown_feature_weight",
}


def parse_goal_file(text: str) -> GoalSequence:
    params = {}
    goals = []
    name, dampening, features = None, 0.1, []

    def close_goal(line):
        if name is None:
            return
        if not features:
            raise GoalFormatError(line, f"goal {name!r} has no features")
        goals.append(TestGoal(name, tuple(features), dampening))

    line_no = 0
    for line_no, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].strip()
        if not content:
            continue
        parts = content.split()
        if parts[0] == "params":
            for p in parts[1:]:
                k, _, v = p.partition("=")
                if k not in _PARAM_FIELDS:
                    raise GoalFormatError(line_no, f"unknown param {k!r}")
                params[_PARAM_FIELDS[k]] = float(v)
        elif parts[0] == "goal":
            close_goal(line_no)
            if len(parts) < 2:
                raise GoalFormatError(line_no, "goal needs a name")
            name, dampening, features = parts[1], 0.1, []
            for p in parts[2:]:
                k, _, v = p.partition("=")
                if k != "d":
                    raise GoalFormatError(line_no, f"unknown goal option {k!r}")
                dampening = float(v)
        else:
            if name is None:
                raise GoalFormatError(line_no, "feature line outside any goal")
            if len(parts) != 3:
                raise GoalFormatError(line_no, "feature must be: matcher weight criterion")
            matcher = parse_matcher(parts[0], line_no)
            try:
                weight, criterion = float(parts[1]), float(parts[2])
            except ValueError:
                raise GoalFormatError(line_no, "weight and criterion must be numbers") from None
            features.append(Feature(matcher, weight, criterion))
    close_goal(line_no)
    if not goals:
        raise GoalFormatError(line_no, "no goals in file")
    return GoalSequence(tuple(goals), **params)


def goal_file_text(seq: GoalSequence) -> str:
    out = [
        "params criteria_threshold={} completion_threshold={} goal_reward={} unknown_weight={}".format(
            seq.criteria_threshold, seq.completion_threshold,
            seq.goal_reward, seq.unknown_feature_weight)
    ]
    for goal in seq.goals:
        out.append(f"goal {goal.name} d={goal.dampening}")
        for f in goal.features:
            out.append(f"  {f.matcher.text()} {f.weight} {f.criterion}")
    return "\n".join(out) + "\n"
