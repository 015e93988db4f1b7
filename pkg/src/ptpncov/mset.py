"""Immutable finite multisets with deterministic ordering.

Every container in this package that represents a marking, an arc set or a
block of abstract tokens is a Multiset.  Elements must be hashable and
totally orderable so that equality, hashing and rendering are canonical.
"""

from __future__ import annotations

from typing import Any, Iterable, Iterator, Tuple


class Multiset:
    """A frozen multiset stored as sorted (element, count) pairs."""

    __slots__ = ("_items", "_hash")

    def __init__(self, elems: Iterable[Any] = ()):
        counts: dict = {}
        for e in elems:
            counts[e] = counts.get(e, 0) + 1
        self._items: Tuple[Tuple[Any, int], ...] = tuple(sorted(counts.items()))
        self._hash = hash(self._items)

    @classmethod
    def from_counts(cls, counts: Iterable[Tuple[Any, int]]) -> "Multiset":
        merged: dict = {}
        for e, n in counts:
            if n < 0:
                raise ValueError("negative multiplicity")
            if n:
                merged[e] = merged.get(e, 0) + n
        m = cls()
        m._items = tuple(sorted(merged.items()))
        m._hash = hash(m._items)
        return m

    # -- queries ---------------------------------------------------------

    def count(self, e: Any) -> int:
        for x, n in self._items:
            if x == e:
                return n
        return 0

    def items(self) -> Tuple[Tuple[Any, int], ...]:
        return self._items

    def support(self) -> Tuple[Any, ...]:
        return tuple(x for x, _ in self._items)

    def __len__(self) -> int:
        return sum(n for _, n in self._items)

    def __iter__(self) -> Iterator[Any]:
        for x, n in self._items:
            for _ in range(n):
                yield x

    def __bool__(self) -> bool:
        return bool(self._items)

    def __contains__(self, e: Any) -> bool:
        return self.count(e) > 0

    def __eq__(self, other: Any) -> bool:
        return isinstance(other, Multiset) and self._items == other._items

    def __lt__(self, other: "Multiset") -> bool:
        return self._items < other._items

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        inner = ", ".join(
            f"{x!r}" + (f"^{n}" if n > 1 else "") for x, n in self._items
        )
        return f"[{inner}]"

    # -- algebra ---------------------------------------------------------

    def __add__(self, other: "Multiset") -> "Multiset":
        return Multiset.from_counts(self._items + other._items)

    def __sub__(self, other: "Multiset") -> "Multiset":
        counts = dict(self._items)
        for e, n in other._items:
            have = counts.get(e, 0)
            if have < n:
                raise ValueError(f"multiset difference would be negative at {e!r}")
            counts[e] = have - n
        return Multiset.from_counts(counts.items())

    def __le__(self, other: "Multiset") -> bool:
        return all(other.count(e) >= n for e, n in self._items)

    def map(self, fn) -> "Multiset":
        return Multiset(fn(e) for e in self)

    def filter(self, pred) -> "Multiset":
        return Multiset(e for e in self if pred(e))


EMPTY = Multiset()


def msum(msets: Iterable[Multiset]) -> Multiset:
    total = EMPTY
    for m in msets:
        total = total + m
    return total


def sub_multisets(m: Multiset) -> Iterator[Multiset]:
    """Enumerate all sub-multisets of m (product over per-element counts)."""
    items = m.items()

    def rec(i: int, acc: list) -> Iterator[Multiset]:
        if i == len(items):
            yield Multiset.from_counts(acc)
            return
        e, n = items[i]
        for k in range(n + 1):
            yield from rec(i + 1, acc + [(e, k)])

    yield from rec(0, [])
