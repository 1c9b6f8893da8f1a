"""Transposition table: one statistics entry per 64-bit position key.

Entries are shared: every tree node whose position hashes to the same key
reads and writes the same entry, so two move orders reaching one position
pool their visits.  All stat writes go through TranspositionTable.update,
which keeps the write path subclass-observable.
"""

from __future__ import annotations

_NEG_INF = float("-inf")


class StatEntry:
    __slots__ = ("key", "visits", "total", "best", "sumsq")

    def __init__(self, key: int):
        self.key = key
        self.visits = 0
        self.total = 0.0
        self.best = _NEG_INF
        self.sumsq = 0.0

    @property
    def mean(self) -> float:
        return self.total / self.visits if self.visits else 0.0

    def __repr__(self):
        return (f"StatEntry(key={self.key:#x}, visits={self.visits}, "
                f"total={self.total:.6g}, best={self.best:.6g})")


class TranspositionTable:
    def __init__(self):
        self.entries: dict = {}

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, key: int) -> bool:
        return key in self.entries

    def get(self, key: int):
        return self.entries.get(key)

    def get_or_create(self, key: int):
        """Returns (entry, created)."""
        entry = self.entries.get(key)
        if entry is not None:
            return entry, False
        entry = StatEntry(key)
        self.entries[key] = entry
        return entry, True

    def update(self, entry: StatEntry, score: float) -> None:
        entry.visits += 1
        entry.total += score
        entry.sumsq += score * score
        if score > entry.best:
            entry.best = score
