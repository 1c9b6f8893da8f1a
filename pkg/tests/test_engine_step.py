"""Step semantics: movement, pushing, collecting, terminations, events."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from playtest.engine.types import (
    ACTIONS,
    LOSE,
    RUNNING,
    WIN,
    SteppedTerminalState,
)

from conftest import walk


def classes_at(game, state, xy):
    idx = xy[1] * game.width + xy[0]
    return [cls for _, cls in game.sprites_at(state, idx)]


def test_initial_state(toy_game):
    s0 = toy_game.initial_state()
    assert (s0.tick, s0.status, s0.facing, s0.inventory) == (0, RUNNING, "up", ())
    assert toy_game.cell_xy(s0.avatar) == (1, 1)
    # Only classes some rule can affect are carried per step.
    assert {cls for _, cls, _ in s0.sprites} == {"box", "key", "gem"}


def test_static_split(toy_game):
    assert toy_game.dynamic_classes == {"avatar", "box", "key", "gem"}
    full = toy_game.sprite_instances(toy_game.initial_state())
    assert sum(1 for _, cls, _ in full if cls == "wall") == 18
    assert sum(1 for _, cls, _ in full if cls == "avatar") == 1


def test_plain_move(toy_game):
    s0 = toy_game.initial_state()
    s1, events = toy_game.step(s0, "right")
    assert toy_game.cell_xy(s1.avatar) == (2, 1)
    assert (s1.tick, s1.facing) == (1, "right")
    assert [e.effect for e in events] == ["move"]
    assert events[0].cell == (2, 1)
    assert s0.tick == 0  # states are immutable snapshots


def test_blocked_move_turns_in_place(toy_game):
    s0 = toy_game.initial_state()
    s1, events = toy_game.step(s0, "up")
    assert s1.avatar == s0.avatar
    assert (s1.tick, s1.facing) == (1, "up")
    assert [(e.actor, e.actee, e.effect) for e in events] == [("avatar", "wall", "blockMove")]
    assert events[0].cell == (1, 0)
    assert events[0].witness is None


def test_nil_only_ticks(toy_game):
    s0 = toy_game.initial_state()
    s1, events = toy_game.step(s0, "nil")
    assert events == ()
    assert s1 == s0._replace(tick=1)


def test_use_emits_for_each_faced_sprite(toy_game):
    s0 = toy_game.initial_state()  # facing up at (1,1): wall above
    _, events = toy_game.step(s0, "use")
    assert [(e.actor, e.actee, e.effect, e.cell) for e in events] == [
        ("avatar", "wall", "use", (1, 0))
    ]


def test_use_on_empty_cell(toy_game):
    s0 = toy_game.initial_state()._replace(facing="right")
    s1, events = toy_game.step(s0, "use")
    assert events == ()
    assert s1.avatar == s0.avatar and s1.tick == 1


def test_use_out_of_bounds(toy_game):
    # Defensive path: parse_level forbids avatars on the border, but the
    # stepper itself must tolerate a corner state.
    s0 = toy_game.initial_state()._replace(avatar=0, facing="up")
    _, events = toy_game.step(s0, "use")
    assert events == ()


def test_collect_item(toy_game):
    s1, events = walk(toy_game, ["right", "right"])
    assert toy_game.cell_xy(s1.avatar) == (3, 1)
    assert s1.inventory == ("key",)
    assert ("avatar", "key", "collectItem") in {(e.actor, e.actee, e.effect) for e in events}
    assert "key" not in {cls for _, cls, _ in s1.sprites}


def test_win_at_door_with_key(toy_game):
    s, events = walk(toy_game, ["right", "right", "down", "down", "right"])
    assert s.status == WIN
    assert events[-1].effect == "winIfCarrying"
    with pytest.raises(SteppedTerminalState):
        toy_game.step(s, "nil")


def test_door_blocks_without_key(toy_compile):
    game = toy_compile("WWWWWW\nWA.dgW\nWWWWWW")
    s, events = walk(game, ["right", "right"])
    assert s.status == RUNNING
    assert game.cell_xy(s.avatar) == (2, 1)
    assert (events[-1].actor, events[-1].actee, events[-1].effect) == (
        "avatar", "door", "blockMove")


def test_push_into_free_cell(toy_game):
    s, events = walk(toy_game, ["down", "right"])
    assert toy_game.cell_xy(s.avatar) == (2, 2)
    assert classes_at(toy_game, s, (3, 2)) == ["box"]
    assert [e.effect for e in events if e.tick == 2] == ["move", "pushActee"]


def test_push_blocked_by_wall(toy_game):
    # Two pushes park the box against the east wall; the third is refused.
    s, _ = walk(toy_game, ["down", "right", "right"])
    assert classes_at(toy_game, s, (4, 2)) == ["box"]
    s1, events = toy_game.step(s, "right")
    assert s1.avatar == s.avatar
    pairs = [(e.actor, e.actee, e.effect) for e in events]
    assert ("avatar", "box", "blockMove") in pairs
    assert ("box", "wall", "blockMove") in pairs
    assert [e for e in events if e.effect == "move"] == []


def test_push_onto_unrelated_sprite_overlaps(toy_game):
    # No box/gem rule exists, so the push lands the box on the gem cell
    # without any event from that pair.
    s, events = walk(toy_game, ["right", "down"])
    assert sorted(classes_at(toy_game, s, (2, 3))) == ["box", "gem"]
    assert {(e.actor, e.actee) for e in events if e.tick == 2} == {
        ("avatar", ""), ("avatar", "box")}


def test_gem_termination_win(toy_game):
    s, events = walk(toy_game, ["down", "down", "right"])
    assert s.status == WIN
    assert (events[-1].actor, events[-1].effect) == ("gem", "win")
    assert s.inventory == ("gem",)


def test_avatar_death_loses(toy_compile):
    game = toy_compile("WWWWW\nWAxgW\nWWWWW")
    s, events = walk(game, ["right"])
    assert s.status == LOSE
    assert s.avatar == -1
    assert [e.effect for e in events] == ["move", "destroyActor", "lose"]


def test_legal_actions(toy_game):
    s0 = toy_game.initial_state()
    assert toy_game.legal_actions(s0) == ACTIONS
    assert toy_game.legal_actions(s0._replace(status=WIN)) == ()


def test_move_cap_scales_with_area(toy_game):
    assert toy_game.move_cap == 10 * 6 * 5


@settings(max_examples=60, deadline=None)
@given(st.lists(st.sampled_from(ACTIONS), max_size=40))
def test_step_invariants(toy_game, toy_shipped, actions):
    for game in (toy_game, toy_shipped):
        state = game.initial_state()
        steps = 0
        for action in actions:
            if state.status != RUNNING:
                break
            state, _ = game.step(state, action)
            steps += 1
            assert state.tick == steps
            assert state.status in (RUNNING, WIN, LOSE)
            assert state.inventory == tuple(sorted(state.inventory))
            ids = [sid for sid, _, _ in state.sprites]
            assert ids == sorted(ids) and len(ids) == len(set(ids))
            for _, _, cell in state.sprites:
                assert 0 <= cell < game.width * game.height
            assert state.avatar == -1 or 0 <= state.avatar < game.width * game.height
