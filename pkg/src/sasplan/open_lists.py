"""Open-list combinators: keyed FIFO buckets, preferred sublists,
alternation with boosting.

Each sublist is a bucket map from integer key tuples to FIFO queues;
popping returns the entry minimizing (key, insertion order).  Alternation
picks the nonempty sublist with the lowest selection counter (ties to the
lowest index) and charges it one credit; boosting subtracts a credit
block from every preferred sublist, so those sublists win the next
selections while they have entries.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass

DEFAULT_BOOST = 1000


class EmptyListError(Exception):
    """pop_best on an empty sublist."""


class AllEmptyError(Exception):
    """Selection requested while every sublist is empty."""


@dataclass(frozen=True)
class Entry:
    state: int
    key: tuple[int, ...]
    seq: int


class Sublist:
    """One keyed FIFO bucket list with an alternation counter."""

    def __init__(self, preferred_only: bool = False):
        self.preferred_only = preferred_only
        self.counter = 0
        self._buckets: dict[tuple[int, ...], deque[Entry]] = {}
        self._key_heap: list[tuple[int, ...]] = []
        self._size = 0

    def __len__(self) -> int:
        return self._size

    def push(self, entry: Entry) -> None:
        bucket = self._buckets.get(entry.key)
        if bucket is None:
            bucket = self._buckets[entry.key] = deque()
            heapq.heappush(self._key_heap, entry.key)
        bucket.append(entry)
        self._size += 1

    def pop_best(self) -> Entry:
        """Entry with the lexicographically smallest key; FIFO within a key."""
        if not self._size:
            raise EmptyListError("sublist is empty")
        while True:
            key = self._key_heap[0]
            bucket = self._buckets[key]
            if not bucket:
                heapq.heappop(self._key_heap)
                del self._buckets[key]
                continue
            self._size -= 1
            return bucket.popleft()


class OpenPolicy:
    """Ordered sublists selected by counter-based alternation."""

    def __init__(self, sublists: list[Sublist], boost_amount: int = DEFAULT_BOOST):
        if not sublists:
            raise ValueError("a policy needs at least one sublist")
        self.sublists = sublists
        self.boost_amount = boost_amount
        self._seq = 0

    def __len__(self) -> int:
        return sum(len(s) for s in self.sublists)

    @property
    def has_preferred_sublists(self) -> bool:
        return any(s.preferred_only for s in self.sublists)

    def next_seq(self) -> int:
        self._seq += 1
        return self._seq

    def select_sublist(self) -> int:
        """Index of the nonempty sublist with minimal counter (ties to the
        lowest index); charges the chosen sublist one credit."""
        best = -1
        for i, sub in enumerate(self.sublists):
            if len(sub) and (best < 0 or sub.counter < self.sublists[best].counter):
                best = i
        if best < 0:
            raise AllEmptyError("all sublists are empty")
        self.sublists[best].counter += 1
        return best

    def boost(self) -> None:
        """Credit every preferred sublist; boosts accumulate without clamping."""
        for sub in self.sublists:
            if sub.preferred_only:
                sub.counter -= self.boost_amount
