"""Transposition keys: what they must and must not depend on."""

from playtest.engine.keys import raw_state_key, state_key
from playtest.testmodel.teststate import TestState, update_test_state


def key_of(game, state, test=None, goal_index=0):
    return state_key(state, test if test is not None else TestState(), goal_index, game)


def test_key_is_deterministic(toy_game):
    s0 = toy_game.initial_state()
    assert key_of(toy_game, s0) == key_of(toy_game, s0)
    assert isinstance(key_of(toy_game, s0), int)


def test_tick_is_excluded(toy_game):
    # Paths of different lengths reaching one configuration share stats.
    s0 = toy_game.initial_state()
    s1, _ = toy_game.step(s0, "nil")
    assert s1.tick != s0.tick
    assert key_of(toy_game, s1) == key_of(toy_game, s0)


def test_facing_is_excluded(toy_game):
    s0 = toy_game.initial_state()
    s1, _ = toy_game.step(s0, "up")       # wall bump: turns, nothing else
    assert (s1.facing, s1.avatar) == ("up", s0.avatar)
    assert key_of(toy_game, s1) == key_of(toy_game, s0)


def test_position_changes_key(toy_game):
    s0 = toy_game.initial_state()
    s1, _ = toy_game.step(s0, "right")
    assert key_of(toy_game, s1) != key_of(toy_game, s0)


def test_goal_index_changes_key(toy_game):
    s0 = toy_game.initial_state()
    assert key_of(toy_game, s0, goal_index=0) != key_of(toy_game, s0, goal_index=1)


def test_test_state_changes_key(toy_game):
    # Same board, different interaction history: must not share statistics.
    s0 = toy_game.initial_state()
    _, events = toy_game.step(s0, "up")
    touched = update_test_state(TestState(), events)
    assert touched.fingerprint != TestState().fingerprint
    assert key_of(toy_game, s0, test=touched) != key_of(toy_game, s0)


def test_inventory_changes_key(toy_game):
    s0 = toy_game.initial_state()
    carrying = s0._replace(inventory=("key",))
    assert key_of(toy_game, carrying) != key_of(toy_game, s0)


def test_levels_do_not_collide(toy_game, toy_compile):
    other = toy_compile("WWWWW\nWA.gW\nWWWWW")
    assert key_of(toy_game, toy_game.initial_state()) != key_of(
        other, other.initial_state())


def test_raw_key_ignores_test_and_tick(toy_game):
    s0 = toy_game.initial_state()
    s1, _ = toy_game.step(s0, "nil")
    assert raw_state_key(s0, toy_game) == raw_state_key(s1, toy_game)
    assert isinstance(raw_state_key(s0, toy_game), bytes)


def test_raw_key_tracks_board(toy_game):
    s0 = toy_game.initial_state()
    s1, _ = toy_game.step(s0, "right")
    assert raw_state_key(s0, toy_game) != raw_state_key(s1, toy_game)
