"""Grid-game rule engine: specs, levels, mutations, stepping, witnessing."""

from .game import ALL_ACTIONS, Game, compile_game
from .keys import raw_state_key, state_key
from .mutate import apply_mutations, revert_mutations
from .parser import parse_game_spec, parse_level, parse_mutation_catalog, spec_to_text
from .types import (
    ACTIONS,
    EFFECTS,
    MOVE_ACTIONS,
    SPRITE_KINDS,
    BugMutation,
    ConflictingMutations,
    DuplicateClass,
    GameSpec,
    GameState,
    InteractionEvent,
    InteractionRule,
    LevelError,
    LevelMap,
    SpecError,
    SpecSyntaxError,
    SpriteClass,
    SteppedTerminalState,
    TerminationRule,
    UndeclaredClass,
)

__all__ = [
    "ACTIONS",
    "ALL_ACTIONS",
    "EFFECTS",
    "MOVE_ACTIONS",
    "SPRITE_KINDS",
    "BugMutation",
    "ConflictingMutations",
    "DuplicateClass",
    "Game",
    "GameSpec",
    "GameState",
    "InteractionEvent",
    "InteractionRule",
    "LevelError",
    "LevelMap",
    "SpecError",
    "SpecSyntaxError",
    "SpriteClass",
    "SteppedTerminalState",
    "TerminationRule",
    "UndeclaredClass",
    "apply_mutations",
    "compile_game",
    "parse_game_spec",
    "parse_level",
    "parse_mutation_catalog",
    "raw_state_key",
    "revert_mutations",
    "spec_to_text",
    "state_key",
]
