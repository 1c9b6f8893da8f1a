"""Knowledge-based evaluation: fulfillment, step rewards, goal advancement."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from playtest.engine.types import InteractionEvent
from playtest.testmodel.goals import (
    Feature,
    GoalSequence,
    Matcher,
    SequenceExhausted,
    TestGoal,
    paper_faithful,
)
from playtest.testmodel.rewards import (
    EvalContext,
    advance_goal,
    eval_kbe,
    fulfillment,
)
from playtest.testmodel.teststate import InteractionKey, TestState, update_test_state


def ev(actor, actee, effect, cell, tick=1):
    return InteractionEvent(tick, actor, actee, effect, cell)


class FakeLevel:
    def __init__(self, counts):
        self._counts = counts

    def class_count(self, cls):
        return self._counts.get(cls, 0)


WALLS4 = FakeLevel({"wall": 4, "gem": 1, "key": 1})


def seq_of(*goals, **params):
    return GoalSequence(tuple(goals), **params)


# ── Fulfillment ──────────────────────────────────────────────────────────────


def test_fulfillment_empty_history_is_zero():
    goal = TestGoal("g", (Feature(Matcher("avatar", "wall", None), 1.0, 0.5),))
    assert fulfillment(TestState(), goal, WALLS4) == 0.0


def test_fulfillment_half_criterion_two_of_four_walls():
    # target = ceil(0.5 * 4) = 2, two distinct walls touched -> 1.0
    goal = TestGoal("g", (Feature(Matcher("avatar", "wall", None), 1.0, 0.5),))
    test = update_test_state(TestState(), [
        ev("avatar", "wall", "use", (1, 0)),
        ev("avatar", "wall", "use", (2, 0)),
    ])
    assert fulfillment(test, goal, WALLS4) == 1.0


def test_fulfillment_is_mean_over_features():
    goal = TestGoal("g", (
        Feature(Matcher("avatar", "gem", None), 1.0, 1.0),
        Feature(Matcher("avatar", "key", None), 1.0, 1.0),
    ))
    test = update_test_state(TestState(), [ev("avatar", "gem", "collectItem", (2, 3))])
    assert fulfillment(test, goal, WALLS4) == 0.5


def test_fulfillment_threshold_cutoff():
    goal = TestGoal("g", (
        Feature(Matcher("avatar", "gem", None), 1.0, 1.0),
        Feature(Matcher("avatar", "key", None), 1.0, 1.0),
    ))
    test = update_test_state(TestState(), [ev("avatar", "gem", "collectItem", (2, 3))])
    assert fulfillment(test, goal, WALLS4, threshold=0.75) == 0.0
    assert fulfillment(test, goal, WALLS4, threshold=0.5) == 0.5


def test_fulfillment_featureless_goal_is_complete():
    assert fulfillment(TestState(), TestGoal("g", ()), WALLS4) == 1.0


# ── Step evaluation ──────────────────────────────────────────────────────────


def test_eval_empty_events_is_exactly_zero():
    goal = TestGoal("g", (Feature(Matcher("avatar", "wall", None), 1.0, 0.5),))
    assert eval_kbe(TestState(), [], goal, seq_of(goal), WALLS4) == 0.0


def test_eval_goal_completion_is_nine():
    # f: 0 -> 1 with no feature term: 10^1 - 10^0 = 9.
    goal = TestGoal("g", (Feature(Matcher("avatar", "gem", None), 0.0, 1.0),))
    reward = eval_kbe(TestState(), [ev("avatar", "gem", "collectItem", (2, 3))],
                      goal, seq_of(goal), WALLS4)
    assert reward == pytest.approx(9.0, abs=1e-9)


def test_eval_unknown_event_is_minus_one():
    goal = TestGoal("g", (Feature(Matcher("avatar", "wall", None), 1.0, 0.5),))
    reward = eval_kbe(TestState(), [ev("avatar", "door", "blockMove", (4, 3))],
                      goal, seq_of(goal), WALLS4)
    assert reward == pytest.approx(-1.0, abs=1e-9)


def test_eval_unknown_counts_distinct_triples_once():
    goal = TestGoal("g", (Feature(Matcher("avatar", "wall", None), 1.0, 0.5),))
    seq = seq_of(goal)
    same = [ev("avatar", "door", "blockMove", (4, 3)),
            ev("avatar", "door", "blockMove", (4, 3), tick=2)]
    different = [ev("avatar", "door", "blockMove", (4, 3)),
                 ev("box", "door", "blockMove", (4, 2))]
    assert eval_kbe(TestState(), same, goal, seq, WALLS4) == pytest.approx(-1.0)
    assert eval_kbe(TestState(), different, goal, seq, WALLS4) == pytest.approx(-2.0)


def test_eval_surpassed_feature_pays_dampened_weight():
    # Feature already at its criterion; a new instance pays w*d = 2*0.1.
    goal = TestGoal("g", (Feature(Matcher("avatar", "wall", None), 2.0, 0.25),))
    test = update_test_state(TestState(), [ev("avatar", "wall", "use", (1, 0))])
    reward = eval_kbe(test, [ev("avatar", "wall", "use", (2, 0))],
                      goal, seq_of(goal), WALLS4)
    assert reward == pytest.approx(0.2, abs=1e-9)


def test_eval_repeat_instance_pays_nothing():
    goal = TestGoal("g", (Feature(Matcher("avatar", "wall", None), 2.0, 0.25),))
    test = update_test_state(TestState(), [ev("avatar", "wall", "use", (1, 0))])
    reward = eval_kbe(test, [ev("avatar", "wall", "use", (1, 0), tick=2)],
                      goal, seq_of(goal), WALLS4)
    assert reward == 0.0


def test_eval_repeats_within_one_step_pay_once():
    goal = TestGoal("g", (Feature(Matcher("avatar", "wall", None), 2.0, 1.0),))
    step = [ev("avatar", "wall", "use", (1, 0)),
            ev("avatar", "wall", "use", (1, 0), tick=2)]
    once = eval_kbe(TestState(), step[:1], goal, seq_of(goal), WALLS4)
    both = eval_kbe(TestState(), step, goal, seq_of(goal), WALLS4)
    assert once == both


def test_eval_feature_term_plus_goal_term():
    # One fresh wall at weight 1 while f climbs 0 -> 1/2: 1 + 10^0.5 - 10^0.
    goal = TestGoal("g", (Feature(Matcher("avatar", "wall", None), 1.0, 0.5),))
    reward = eval_kbe(TestState(), [ev("avatar", "wall", "use", (1, 0))],
                      goal, seq_of(goal), WALLS4)
    assert reward == pytest.approx(1.0 + 10 ** 0.5 - 1.0, abs=1e-9)


def test_eval_cell_pinned_feature_takes_fallback_path():
    goal = TestGoal("g", (Feature(Matcher("avatar", "wall", None, (1, 0)), 1.0, 1.0),))
    hit = eval_kbe(TestState(), [ev("avatar", "wall", "use", (1, 0))],
                   goal, seq_of(goal), WALLS4)
    miss = eval_kbe(TestState(), [ev("avatar", "wall", "use", (2, 0))],
                    goal, seq_of(goal), WALLS4)
    assert hit == pytest.approx(1.0 + 9.0)
    assert miss == pytest.approx(-1.0)


# ── EvalContext ──────────────────────────────────────────────────────────────


def wall_goal(weight=1.0, criterion=0.5):
    return TestGoal("walls", (Feature(Matcher("avatar", "wall", None), weight, criterion),))


def test_context_matches_one_shot():
    goal = wall_goal()
    seq = seq_of(goal)
    events = [ev("avatar", "wall", "use", (1, 0)), ev("avatar", "door", "blockMove", (4, 3))]
    ctx = EvalContext(seq, WALLS4)
    assert ctx.reward_only(TestState(), events, goal) == eval_kbe(
        TestState(), events, goal, seq, WALLS4)


def test_context_step_eval_clones():
    goal = wall_goal()
    ctx = EvalContext(seq_of(goal), WALLS4)
    test = TestState()
    events = [ev("avatar", "wall", "use", (1, 0))]
    reward, post = ctx.step_eval(test, events, goal)
    assert test.executed == {}                      # input untouched
    assert post.executed and reward == ctx.reward_only(TestState(), events, goal)
    # Applying in place gives the same value and mutates.
    again = TestState()
    assert ctx.apply_eval(again, events, goal) == reward
    assert again.executed == post.executed
    assert again.fingerprint == post.fingerprint


def test_context_advance_index_walks_completed_goals():
    g1 = TestGoal("one", (Feature(Matcher("avatar", "gem", None), 1.0, 1.0),))
    g2 = TestGoal("two", (Feature(Matcher("avatar", "key", None), 1.0, 1.0),))
    ctx = EvalContext(seq_of(g1, g2), WALLS4)
    test = TestState()
    test.apply([ev("avatar", "gem", "collectItem", (2, 3))], g1)
    assert ctx.advance_index(test, 0) == 1
    # Tracking follows whichever goal is active, as in the episode loop.
    test.apply([ev("avatar", "key", "collectItem", (3, 1))], g2)
    assert ctx.advance_index(test, 1) == 2


def test_context_advance_cascades_over_pre_satisfied_goals():
    # An interaction recorded before its goal became active still counts:
    # activation backfills the tracking sets from the executed map.
    g1 = TestGoal("one", (Feature(Matcher("avatar", "gem", None), 1.0, 1.0),))
    g2 = TestGoal("two", (Feature(Matcher("avatar", "key", None), 1.0, 1.0),))
    ctx = EvalContext(seq_of(g1, g2), WALLS4)
    test = TestState()
    test.apply([ev("avatar", "key", "collectItem", (3, 1)),
                ev("avatar", "gem", "collectItem", (2, 3))], g1)
    assert ctx.advance_index(test, 0) == 2


# ── advance_goal ─────────────────────────────────────────────────────────────


def test_advance_goal_holds_below_threshold():
    seq = seq_of(wall_goal())
    assert advance_goal(seq, TestState(), WALLS4) is seq


def test_advance_goal_moves_on_completion():
    seq = seq_of(wall_goal())
    test = update_test_state(TestState(), [
        ev("avatar", "wall", "use", (1, 0)),
        ev("avatar", "wall", "use", (2, 0)),
    ])
    advanced = advance_goal(seq, test, WALLS4)
    assert advanced.active_index == 1 and advanced.done


def test_advance_goal_one_step_at_a_time():
    # Both goals already satisfied: each call still advances exactly one.
    g1, g2 = wall_goal(), TestGoal("g2", (Feature(Matcher("avatar", "wall", None), 1.0, 0.25),))
    seq = seq_of(g1, g2)
    test = update_test_state(TestState(), [
        ev("avatar", "wall", "use", (1, 0)),
        ev("avatar", "wall", "use", (2, 0)),
    ])
    once = advance_goal(seq, test, WALLS4)
    assert once.active_index == 1
    twice = advance_goal(once, test, WALLS4)
    assert twice.active_index == 2


def test_advance_goal_exhausted():
    seq = seq_of(wall_goal()).advanced()
    with pytest.raises(SequenceExhausted):
        advance_goal(seq, TestState(), WALLS4)


def test_paper_faithful_advances_at_first_touch(toy_level):
    goal = TestGoal("walls", (Feature(Matcher("avatar", "wall", None), 1.0, 1.0),))
    seq = paper_faithful(seq_of(goal))
    test = update_test_state(TestState(), [ev("avatar", "wall", "use", (1, 0))])
    # One of eighteen walls is far below full completion but over c_T.
    assert advance_goal(seq, test, toy_level).active_index == 1


# ── Properties ───────────────────────────────────────────────────────────────

cells = st.tuples(st.integers(0, 3), st.integers(0, 3))
event_lists = st.lists(
    st.builds(lambda a, e, c: ev("avatar", a, e, c),
              st.sampled_from(["wall", "gem", "key", "door"]),
              st.sampled_from(["use", "blockMove", "collectItem"]),
              cells),
    max_size=12,
)


@settings(max_examples=100, deadline=None)
@given(event_lists, event_lists)
def test_fulfillment_monotone_in_history(first, extra):
    goal = TestGoal("g", (
        Feature(Matcher("avatar", "wall", None), 1.0, 0.5),
        Feature(Matcher("avatar", "gem", None), 1.0, 1.0),
    ))
    low = fulfillment(update_test_state(TestState(), first), goal, WALLS4, threshold=1e-9)
    high = fulfillment(update_test_state(TestState(), first + extra), goal, WALLS4,
                       threshold=1e-9)
    assert high >= low


@settings(max_examples=100, deadline=None)
@given(event_lists, event_lists)
def test_goal_term_never_negative(history, step):
    goal = TestGoal("g", (
        Feature(Matcher("avatar", "wall", None), 1.0, 0.5),
        Feature(Matcher("avatar", "gem", None), 1.0, 1.0),
    ))
    seq = seq_of(goal)
    ctx = EvalContext(seq, WALLS4)
    test = update_test_state(TestState(), history, goal)
    before = ctx.fulfillment(test, goal)
    after_state = update_test_state(test, step, goal)
    after = ctx.fulfillment(after_state, goal)
    assert after >= before
    assert seq.goal_reward ** after - seq.goal_reward ** before >= 0.0


@settings(max_examples=100, deadline=None)
@given(event_lists, event_lists)
def test_reward_matches_decomposition(history, step):
    # The context reward equals feature term + unknown term + goal term,
    # recomputed here the slow way from first principles.
    features = (
        Feature(Matcher("avatar", "wall", None), 1.5, 0.5),
        Feature(Matcher("avatar", "gem", None), 0.5, 1.0),
    )
    goal = TestGoal("g", features)
    seq = seq_of(goal)
    ctx = EvalContext(seq, WALLS4)
    test = update_test_state(TestState(), history, goal)

    reward = ctx.reward_only(test, step, goal)

    before = ctx.fulfillment(test, goal)
    after = ctx.fulfillment(update_test_state(test, step, goal), goal)
    goal_term = seq.goal_reward ** after - seq.goal_reward ** before

    tracked = [set(test.per_feature.get(fid, ())) for fid in goal.feature_ids]
    targets = ctx.targets[goal.name]
    surpassed = [len(tr) >= tg for tr, tg in zip(tracked, targets)]
    feature_term = 0.0
    unknown_triples = set()
    for e in step:
        if e.effect == "move":
            continue
        matched = False
        for i, f in enumerate(features):
            if f.matcher.matches(InteractionKey(e.actor, e.actee, e.effect, e.cell)):
                matched = True
                if e.cell not in tracked[i]:
                    tracked[i].add(e.cell)
                    feature_term += f.weight * (goal.dampening if surpassed[i] else 1.0)
        if not matched:
            unknown_triples.add((e.actor, e.actee, e.effect))
    expected = feature_term + len(unknown_triples) * seq.unknown_feature_weight + goal_term
    assert reward == pytest.approx(expected, abs=1e-9)
