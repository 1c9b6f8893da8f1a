"""Fulfillment and knowledge-based step evaluation.

A feature's progress is min(1, distinct instances touched / target); goal
fulfillment is the mean over features, read as 0 below the sequence's
criteria threshold.  The evaluation of one step is

    sum over feature instances newly observed this step of the feature
    weight (dampened once the feature's criterion is already met)
  + unknown-feature weight per distinct interaction seen that matches no
    feature of the active goal
  + goal_reward ** fulfillment(after) - goal_reward ** fulfillment(before)

Plain `move` events carry no feature information and are skipped.

EvalContext packages the per-level feature targets so the search loop can
evaluate thousands of steps without re-deriving them; the module-level
functions are the one-shot equivalents.
"""

from __future__ import annotations

from .goals import GoalSequence, SequenceExhausted, TestGoal
from .teststate import InteractionKey, TestState, feature_target


def _progress(test: TestState, goal: TestGoal, targets) -> list:
    out = []
    for feature, fid, target in zip(goal.features, goal.feature_ids, targets):
        if target <= 0:
            out.append(1.0)
            continue
        n = test.distinct_instances(feature, fid)
        out.append(1.0 if n >= target else n / target)
    return out


def _fulfillment(progress, threshold: float) -> float:
    if not progress:
        return 1.0
    f = sum(progress) / len(progress)
    return f if f >= threshold else 0.0


class EvalContext:
    """Evaluation bound to one (sequence, level): precomputed targets."""

    def __init__(self, seq: GoalSequence, level):
        self.seq = seq
        self.level = level
        self.targets = {
            goal.name: tuple(feature_target(f, level) for f in goal.features)
            for goal in seq.goals
        }

    def fulfillment(self, test: TestState, goal: TestGoal) -> float:
        progress = _progress(test, goal, self.targets[goal.name])
        return _fulfillment(progress, self.seq.criteria_threshold)

    def _reward(self, test: TestState, events, goal: TestGoal, apply_to=None) -> float:
        """Eq-style step value.  When apply_to is given the events are also
        recorded there (it must be a clone of `test` or `test` itself).

        Only newly observed instances count: an event re-touching a cell a
        feature has already banked earns nothing, so repeat interactions pay
        out exactly once per distinct instance (dampened once the feature's
        criterion was met beforehand).
        """
        seq = self.seq
        targets = self.targets[goal.name]
        features = goal.features
        fids = goal.feature_ids
        tracked_sets = []
        for feature, fid in zip(features, fids):
            tracked = test.per_feature.get(fid)
            if tracked is None:
                matcher = feature.matcher
                tracked = {k.cell for k in test.executed if matcher.matches(k)}
            tracked_sets.append(tracked)
        progress = []
        for target, tracked in zip(targets, tracked_sets):
            if target <= 0:
                progress.append(1.0)
            else:
                n = len(tracked)
                progress.append(1.0 if n >= target else n / target)
        f_before = _fulfillment(progress, seq.criteria_threshold)

        feature_term = 0.0
        new_cells = [None] * len(features)
        unmatched: set = set()
        for ev in events:
            if ev.effect == "move":
                continue
            indices = goal.match_indices(ev.actor, ev.actee, ev.effect)
            if indices is None:
                key = InteractionKey(ev.actor, ev.actee, ev.effect, ev.cell)
                indices = tuple(i for i, f in enumerate(features)
                                if f.matcher.matches(key))
            if not indices:
                unmatched.add((ev.actor, ev.actee, ev.effect))
                continue
            for i in indices:
                fresh = new_cells[i]
                if ev.cell in tracked_sets[i] or (fresh is not None and ev.cell in fresh):
                    continue
                if fresh is None:
                    fresh = new_cells[i] = set()
                fresh.add(ev.cell)
                d = goal.dampening if progress[i] >= 1.0 else 1.0
                feature_term += features[i].weight * d
        unknown = len(unmatched) * seq.unknown_feature_weight

        after = list(progress)
        for i, fresh in enumerate(new_cells):
            if fresh is None or targets[i] <= 0 or after[i] >= 1.0:
                continue
            n = len(tracked_sets[i]) + len(fresh)
            after[i] = 1.0 if n >= targets[i] else n / targets[i]
        f_after = _fulfillment(after, seq.criteria_threshold)

        if apply_to is not None:
            apply_to.apply(events, goal)
        gr = seq.goal_reward
        return feature_term + unknown + gr ** f_after - gr ** f_before

    def reward_only(self, test: TestState, events, goal: TestGoal) -> float:
        return self._reward(test, events, goal, apply_to=None)

    def step_eval(self, test: TestState, events, goal: TestGoal):
        post = test.clone()
        reward = self._reward(test, events, goal, apply_to=post)
        return reward, post

    def apply_eval(self, test: TestState, events, goal: TestGoal) -> float:
        """step_eval without the clone: `test` is updated in place."""
        return self._reward(test, events, goal, apply_to=test)

    def advance_index(self, test: TestState, index: int) -> int:
        """Advance past every completed goal starting at `index`."""
        goals = self.seq.goals
        threshold = self.seq.completion_threshold
        while index < len(goals):
            goal = goals[index]
            test.ensure_tracked(goal)
            if self.fulfillment(test, goal) < threshold:
                break
            index += 1
        return index


# ── One-shot public operations ───────────────────────────────────────────────

def fulfillment(test: TestState, goal: TestGoal, level, threshold: float = 0.01) -> float:
    """Mean feature progress for `goal`, 0 below `threshold`."""
    targets = tuple(feature_target(f, level) for f in goal.features)
    return _fulfillment(_progress(test, goal, targets), threshold)


def eval_kbe(test: TestState, events, goal: TestGoal, seq: GoalSequence, level) -> float:
    """Knowledge-based value of one step's events against the active goal."""
    return EvalContext(seq, level).reward_only(test, events, goal)


def advance_goal(seq: GoalSequence, test: TestState, level) -> GoalSequence:
    """Advance the active goal if its fulfillment meets the completion
    threshold.  Raises SequenceExhausted when no goal is active."""
    if seq.done:
        raise SequenceExhausted("sequence already complete")
    goal = seq.active
    test.ensure_tracked(goal)
    f = fulfillment(test, goal, level, seq.criteria_threshold)
    if f >= seq.completion_threshold:
        return seq.advanced()
    return seq
