"""Test state: the record of interactions a play-through has executed.

The test state is the testing-side half of a search position: two game
states that look identical but have different interaction histories must
not share tree statistics.  To keep key computation O(1) the state carries
a rolling 64-bit fingerprint updated per recorded event; the mixing is
seeded-hash based so fingerprints are stable across process runs.

Plain `move` events (avatar stepping into empty space) are observable in
the event stream but not recorded here: locomotion history would make
every path unique and defeat transposition sharing.
"""

from __future__ import annotations

import hashlib
from math import ceil
from typing import NamedTuple, Optional

_M64 = (1 << 64) - 1
_key_ids: dict = {}   # InteractionKey -> stable 64-bit id, process-local cache


class InteractionKey(NamedTuple):
    actor: str
    actee: str
    effect: str
    cell: Optional[tuple] = None


def event_key(event) -> InteractionKey:
    return InteractionKey(event.actor, event.actee, event.effect, event.cell)


def _stable_id(key: InteractionKey) -> int:
    cached = _key_ids.get(key)
    if cached is None:
        h = hashlib.blake2b(repr(key).encode(), key=b"playtest.ikey.v1", digest_size=8)
        cached = _key_ids[key] = int.from_bytes(h.digest(), "little")
    return cached


def _mix(stable: int, count: int) -> int:
    # splitmix64-style avalanche over (key id, count).
    x = (stable ^ (count * 0xFF51AFD7ED558CCD)) & _M64
    x ^= x >> 33
    x = (x * 0xC4CEB9FE1A85EC53) & _M64
    x ^= x >> 29
    return x


class TestState:
    """Executed-interaction counts plus per-feature distinct-instance sets."""

    __slots__ = ("executed", "per_feature", "fingerprint")

    def __init__(self, executed=None, per_feature=None, fingerprint=0):
        self.executed = executed if executed is not None else {}
        self.per_feature = per_feature if per_feature is not None else {}
        self.fingerprint = fingerprint

    def clone(self) -> "TestState":
        return TestState(
            dict(self.executed),
            {fid: set(cells) for fid, cells in self.per_feature.items()},
            self.fingerprint,
        )

    def apply(self, events, goal=None) -> None:
        """Record events in place; `goal` enables incremental feature tracking."""
        executed = self.executed
        fp = self.fingerprint
        features = goal.features if goal is not None else ()
        fids = goal.feature_ids if goal is not None else ()
        for ev in events:
            if ev.effect == "move":
                continue
            key = InteractionKey(ev.actor, ev.actee, ev.effect, ev.cell)
            old = executed.get(key, 0)
            executed[key] = old + 1
            sid = _stable_id(key)
            fp ^= _mix(sid, old) ^ _mix(sid, old + 1)
            if goal is None:
                continue
            indices = goal.match_indices(ev.actor, ev.actee, ev.effect)
            if indices is None:
                indices = tuple(i for i, f in enumerate(features)
                                if f.matcher.matches(key))
            for i in indices:
                fid = fids[i]
                tracked = self.per_feature.get(fid)
                if tracked is None:
                    tracked = self.per_feature[fid] = set()
                tracked.add(ev.cell)
        self.fingerprint = fp

    def ensure_tracked(self, goal) -> None:
        """Backfill distinct-instance sets for a goal's features by scanning
        the executed map.  Called when a goal becomes active so later updates
        can stay incremental."""
        for feature, fid in zip(goal.features, goal.feature_ids):
            if fid in self.per_feature:
                continue
            matcher = feature.matcher
            self.per_feature[fid] = {k.cell for k in self.executed if matcher.matches(k)}

    def distinct_instances(self, feature, fid) -> int:
        tracked = self.per_feature.get(fid)
        if tracked is not None:
            return len(tracked)
        matcher = feature.matcher
        return len({k.cell for k in self.executed if matcher.matches(k)})


def update_test_state(test: TestState, events, goal=None) -> TestState:
    """Pure update: returns a new TestState with the events recorded."""
    new = test.clone()
    new.apply(events, goal)
    return new


def feature_target(feature, level) -> int:
    """Distinct-instance target: ceil(criterion x matching instances).

    The instance population is the level count of the feature's actee class
    when the matcher names one (a cell-specific matcher pins it to 1).
    Instance-less features count as 1 - wildcard and empty actees, but also
    classes with no instance placed in the level, since those can still
    come into existence mid-game (a transformation product).
    """
    m = feature.matcher
    if m.cell is not None:
        count = 1
    elif m.actee:
        count = max(1, level.class_count(m.actee))
    else:
        count = 1
    return ceil(feature.criterion * count)
