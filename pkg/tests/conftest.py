"""Shared fixtures around a hand-sized game.

The toy game is small enough that every expected value in the suite can be
checked on paper: a 6x5 room with one box, one key, one gem, and one door.
"""

import random

import pytest

from playtest.engine.game import compile_game
from playtest.engine.mutate import apply_mutations
from playtest.engine.parser import parse_game_spec, parse_level, parse_mutation_catalog

TOY_SPEC = """\
sprites:
  avatar kind=avatar
  wall kind=wall
  box kind=pushable
  key kind=key
  gem kind=generic
  door kind=door
  spikes kind=hazard
  floor kind=floor

interactions:
  avatar wall blockMove
  avatar box pushActee
  avatar key collectItem(key)
  avatar gem collectItem(gem)
  avatar door winIfCarrying(key)
  avatar door blockMove
  avatar spikes destroyActor
  box wall blockMove
  box box blockMove
  box door blockMove

terminations:
  none avatar lose
  none gem win

levelmapping:
  . floor
  W wall
  B box
  k key
  g gem
  d door
  x spikes
  A avatar
"""

# Avatar (1,1), key (3,1), box (2,2), gem (2,3), door (4,3).
TOY_LEVEL = """\
WWWWWW
WA.k.W
W.B..W
W.g.dW
WWWWWW
"""

TOY_BUGS = """\
T01 removeRule avatar wall blockMove
T02 alterRule avatar door winIfCarrying(key) winIfCarrying()
T03 alterTermination none avatar lose win
"""


@pytest.fixture(scope="session")
def toy_spec():
    return parse_game_spec(TOY_SPEC, name="toy")


@pytest.fixture(scope="session")
def toy_level(toy_spec):
    return parse_level(TOY_LEVEL, toy_spec)


@pytest.fixture(scope="session")
def toy_game(toy_spec, toy_level):
    return compile_game(toy_spec, toy_level)


@pytest.fixture(scope="session")
def toy_catalog(toy_spec):
    return parse_mutation_catalog(TOY_BUGS, toy_spec)


@pytest.fixture(scope="session")
def toy_shipped_spec(toy_spec, toy_catalog):
    return apply_mutations(toy_spec, toy_catalog)


@pytest.fixture(scope="session")
def toy_shipped(toy_shipped_spec, toy_level):
    return compile_game(toy_shipped_spec, toy_level)


@pytest.fixture(scope="session")
def toy_compile(toy_spec):
    """Compile the toy spec against an ad-hoc level grid."""
    def build(level_text, spec=toy_spec):
        return compile_game(spec, parse_level(level_text, spec))
    return build


def walk(game, actions, state=None):
    """Step a game through an action sequence; returns (state, all_events)."""
    state = game.initial_state() if state is None else state
    collected = []
    for action in actions:
        state, events = game.step(state, action)
        collected.extend(events)
    return state, tuple(collected)


@pytest.fixture(scope="session")
def rng():
    return random.Random(20260819)
