"""Core data types for the grid-game rule engine.

A game is a set of sprite classes, an ordered interaction rule list, a
termination rule list, and a character-to-class level mapping.  Levels are
ASCII grids.  Mutations describe small rule edits relative to a golden spec;
a mutated ("shipped") spec keeps enough bookkeeping to attribute behavioural
divergence from the golden rules to individual bug ids at step time.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Optional

# ── Vocabulary ───────────────────────────────────────────────────────────────

SPRITE_KINDS = ("avatar", "wall", "key", "door", "pushable", "hazard", "floor", "generic")

# Rule effects.  One rule carries one effect; the first matching rule for an
# ordered (actor, actee) class pair is the one that applies.
EFFECTS = (
    "blockMove",
    "destroyActee",
    "destroyActor",
    "pushActee",
    "transformActee",   # arg: class the actee turns into
    "collectItem",      # arg: item class added to the inventory
    "overlapAllowed",
    "winIfCarrying",    # arg: required item class; no arg means no requirement
)

# Effects that take a class argument.  winIfCarrying may omit it.
_ARG_EFFECTS = ("transformActee", "collectItem", "winIfCarrying")

ACTIONS = ("up", "down", "left", "right", "use", "nil")
MOVE_ACTIONS = ("up", "down", "left", "right")

# (dx, dy) per facing; y grows downward.
DIRS = {"up": (0, -1), "down": (0, 1), "left": (-1, 0), "right": (1, 0)}

MUTATION_KINDS = ("removeRule", "addRule", "alterRule", "alterTermination")

TERMINATION_PREDICATES = ("none",)   # none <class>: no live instances remain
OUTCOMES = ("win", "lose")

RUNNING, WIN, LOSE = "running", "win", "lose"

# Effect names that only ever appear on events, never on rules.
EVENT_ONLY_EFFECTS = ("move", "use", "win", "lose")


# ── Errors ───────────────────────────────────────────────────────────────────

class SpecError(Exception):
    """Base for spec/level/mutation format and validation errors."""


class SpecSyntaxError(SpecError):
    def __init__(self, line: int, col: int, msg: str):
        super().__init__(f"line {line}, col {col}: {msg}")
        self.line = line
        self.col = col


class UndeclaredClass(SpecError):
    def __init__(self, name: str, where: str):
        super().__init__(f"undeclared sprite class {name!r} referenced in {where}")
        self.name = name


class DuplicateClass(SpecError):
    def __init__(self, name: str):
        super().__init__(f"sprite class {name!r} declared twice")
        self.name = name


class LevelError(SpecError):
    def __init__(self, msg: str, line: int = 0):
        super().__init__(f"line {line}: {msg}" if line else msg)
        self.line = line


class ConflictingMutations(SpecError):
    def __init__(self, bug_a: str, bug_b: str, target: str):
        super().__init__(f"mutations {bug_a} and {bug_b} both touch {target}")


class SteppedTerminalState(Exception):
    """step() was called on a state whose status is not 'running'."""


# ── Spec types ───────────────────────────────────────────────────────────────

class SpriteClass(NamedTuple):
    name: str
    kind: str
    properties: tuple = ()          # reserved; sorted (key, value) pairs


class InteractionRule(NamedTuple):
    actor: str
    actee: str
    effect: str
    arg: Optional[str] = None

    def text(self) -> str:
        if self.effect in _ARG_EFFECTS:
            return f"{self.actor} {self.actee} {self.effect}({self.arg or ''})"
        return f"{self.actor} {self.actee} {self.effect}"


class TerminationRule(NamedTuple):
    predicate: str                  # only "none" for now
    cls: str
    outcome: str

    def text(self) -> str:
        return f"{self.predicate} {self.cls} {self.outcome}"


@dataclass(frozen=True)
class BugMutation:
    bug_id: str
    kind: str
    rule: Optional[InteractionRule] = None        # removeRule / addRule / alterRule target
    new_rule: Optional[InteractionRule] = None    # alterRule replacement
    index: int = 0                                # addRule insertion point
    term: Optional[TerminationRule] = None        # alterTermination target
    new_term: Optional[TerminationRule] = None


@dataclass(frozen=True)
class GameSpec:
    name: str
    sprites: tuple            # tuple[SpriteClass, ...] in declaration order
    interactions: tuple       # tuple[InteractionRule, ...] order significant
    terminations: tuple       # tuple[TerminationRule, ...]
    level_mapping: tuple      # tuple[(char, tuple[class, ...]), ...]
    # Mutation bookkeeping, populated on shipped specs only.
    golden: Optional["GameSpec"] = None
    rule_tags: tuple = ()     # per interaction: bug id for added/altered rules, else None
    removed_rules: tuple = () # ((golden_index, InteractionRule, bug_id), ...)
    term_tags: tuple = ()     # per termination: bug id for altered terminations, else None
    mutations: tuple = ()     # applied BugMutations, catalog order

    def sprite_names(self) -> tuple:
        return tuple(s.name for s in self.sprites)

    def sprite(self, name: str) -> SpriteClass:
        for s in self.sprites:
            if s.name == name:
                return s
        raise KeyError(name)

    def mapping_dict(self) -> dict:
        return dict(self.level_mapping)


class LevelMap(NamedTuple):
    width: int
    height: int
    sprites: tuple            # ((instance_id, class, (x, y)), ...) row-major
    avatar_cell: tuple        # (x, y)
    rows: tuple               # original grid text rows

    def class_count(self, cls: str) -> int:
        return sum(1 for _, c, _ in self.sprites if c == cls)


# ── Runtime types ────────────────────────────────────────────────────────────

class GameState(NamedTuple):
    """Immutable snapshot of a running game.

    `sprites` holds only the dynamic, non-avatar instances; static scenery
    (anything no shipped rule can move, destroy, or transform) lives on the
    compiled game and is not copied per step.
    """
    tick: int
    status: str               # running | win | lose
    avatar: int               # packed cell index, -1 once destroyed
    facing: str               # up | down | left | right
    inventory: tuple          # sorted item class names, repeats allowed
    sprites: tuple            # ((instance_id, class, cell_index), ...) sorted by id


class InteractionEvent(NamedTuple):
    tick: int
    actor: str
    actee: str                # "" when the event has no second participant
    effect: str
    cell: tuple               # (x, y)
    witness: Optional[str] = None   # bug id when behaviour diverged from golden
