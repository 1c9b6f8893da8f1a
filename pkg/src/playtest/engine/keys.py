"""Stable 64-bit keys over (game state, test state, goal index).

Keys are seeded blake2b digests over a canonical packing, so they are
identical across process runs and usable as transposition-table keys.
Collision odds at desk scale (millions of states) are far below 2^-32.

The packing deliberately leaves out two fields:

* tick: paths of different lengths that reach the same configuration
  should share one statistics entry;
* facing: turning has no effect on game state here (`use` is observational,
  and its events land in the test-state fingerprint the moment they occur).
"""

from __future__ import annotations

import hashlib
from array import array

_KEY_SEED = b"playtest.state.v1"
_STATUS_CODE = {"running": 0, "win": 1, "lose": 2}


def state_key(state, test, goal_index: int, game) -> int:
    """Key for a search position.  `test` provides a 64-bit fingerprint."""
    ci = game.class_index
    parts = [_STATUS_CODE[state.status], state.avatar, goal_index, len(state.inventory)]
    for item in state.inventory:
        parts.append(ci[item])
    for sid, cls, cell in state.sprites:
        parts.append(sid)
        parts.append(ci[cls])
        parts.append(cell)
    h = hashlib.blake2b(key=_KEY_SEED, digest_size=8)
    h.update(game.level_tag)
    h.update(array("i", parts).tobytes())
    h.update(test.fingerprint.to_bytes(8, "little"))
    return int.from_bytes(h.digest(), "little")


def raw_state_key(state, game) -> bytes:
    """Dedup key over the game state alone (no test state), for search
    procedures that only care about engine-reachable configurations."""
    ci = game.class_index
    parts = [_STATUS_CODE[state.status], state.avatar, len(state.inventory)]
    for item in state.inventory:
        parts.append(ci[item])
    for sid, cls, cell in state.sprites:
        parts.append(sid)
        parts.append(ci[cls])
        parts.append(cell)
    return array("i", parts).tobytes()
