"""Bounded fact-tuple novelty with partition functions.

A state's novelty w is 1 if it contains an atom never seen before among
the states queried under the same partition key, 2 if it contains an
unseen atom pair (bound k = 2), and k+1 otherwise.  Every query marks all
atoms and pairs of the state as seen, whatever value it returns.

Tables whose estimated bit storage exceeds 2 GiB fall back to bound 1 at
construction time; the decision is never revisited mid-search.
"""

from __future__ import annotations

FALLBACK_THRESHOLD_BYTES = 2 * 1024**3  # 2 GiB


def estimate_table_bytes(atom_count: int, partition_bound: int, bound: int) -> int:
    """Worst-case bit-table bytes: one atom set plus, at bound 2, one pair
    set per partition value."""
    bits = atom_count
    if bound == 2:
        bits += atom_count * (atom_count - 1) // 2
    return partition_bound * ((bits + 7) // 8)


def partition_value_bound(partition: tuple[str, ...], num_landmarks: int, initial_hff: int) -> int:
    """Proxy bound on the number of distinct partition keys.

    The landmark count has `num_landmarks + 1` possible values; the
    relaxed-plan estimate is unbounded, so its proxy is anchored at the
    initial state's value.
    """
    bound = 1
    for name in partition:
        if name == "hlm":
            bound *= num_landmarks + 1
        elif name == "hff":
            bound *= 1 + max(initial_hff, 1)
        else:
            raise ValueError(f"unknown partition component {name!r}")
    return bound


def pair_index(a: int, b: int, atom_count: int) -> int:
    """Bijection from unordered atom-id pairs (a < b) onto
    [0, A*(A-1)/2)."""
    if a > b:
        a, b = b, a
    return a * atom_count - a * (a + 1) // 2 + (b - a - 1)


def pair_from_index(index: int, atom_count: int) -> tuple[int, int]:
    """Inverse of :func:`pair_index`."""
    a = 0
    row = atom_count - 1
    while index >= row:
        index -= row
        a += 1
        row -= 1
    return a, a + 1 + index


class _Record:
    __slots__ = ("atoms", "pairs")

    def __init__(self, atom_count: int, with_pairs: bool):
        self.atoms = bytearray((atom_count + 7) // 8)
        if with_pairs:
            self.pairs = bytearray((atom_count * (atom_count - 1) // 2 + 7) // 8)
        else:
            self.pairs = None


class NoveltyTable:
    """Seen-tuple bit tables, one record per partition key."""

    def __init__(self, atom_count: int, bound: int = 2, fallback_engaged: bool = False):
        if bound not in (1, 2):
            raise ValueError("novelty bound must be 1 or 2")
        self.atom_count = atom_count
        self.bound = bound
        self.fallback_engaged = fallback_engaged
        self._records: dict[tuple, _Record] = {}
        self._bytes_per_record = estimate_table_bytes(atom_count, 1, self.effective_bound)

    @property
    def effective_bound(self) -> int:
        return 1 if self.fallback_engaged else self.bound

    def estimated_bytes(self) -> int:
        return len(self._records) * self._bytes_per_record

    def compute_novelty(self, atom_ids, key: tuple = ()) -> int:
        """Novelty of a state (given by its global atom ids, ascending)
        under `key`; marks all of the state's tuples as seen."""
        k = self.effective_bound
        record = self._records.get(key)
        if record is None:
            record = self._records[key] = _Record(self.atom_count, with_pairs=k == 2)

        seen_atoms = record.atoms
        novel_atom = False
        for a in atom_ids:
            if not seen_atoms[a >> 3] & (1 << (a & 7)):
                seen_atoms[a >> 3] |= 1 << (a & 7)
                novel_atom = True

        novel_pair = False
        if k == 2:
            seen_pairs = record.pairs
            n = self.atom_count
            count = len(atom_ids)
            for i in range(count):
                a = atom_ids[i]
                base = a * n - a * (a + 1) // 2 - a - 1
                for j in range(i + 1, count):
                    p = base + atom_ids[j]
                    if not seen_pairs[p >> 3] & (1 << (p & 7)):
                        seen_pairs[p >> 3] |= 1 << (p & 7)
                        novel_pair = True

        if novel_atom:
            return 1
        if novel_pair:
            return 2
        return k + 1
