"""Finite integer sets stored as sorted, disjoint, non-adjacent ranges."""

from __future__ import annotations

from bisect import bisect_right
from typing import Iterable, Iterator

__all__ = ["IntSet", "EMPTY"]


def _normalize(pairs: Iterable[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    out: list[list[int]] = []
    for lo, hi in sorted(p for p in pairs if p[0] <= p[1]):
        if out and lo <= out[-1][1] + 1:
            if hi > out[-1][1]:
                out[-1][1] = hi
        else:
            out.append([lo, hi])
    return tuple((lo, hi) for lo, hi in out)


class IntSet:
    """Immutable set of integers.

    ``ranges`` holds ``(lo, hi)`` pairs, ascending, with a gap of at least
    two between consecutive ranges. ``min``/``max`` are ``None`` for the
    empty set.
    """

    __slots__ = ("ranges", "min", "max", "size")

    def __init__(self, ranges: tuple[tuple[int, int], ...] = ()):
        # callers must pass normalized ranges; use the constructors otherwise
        self.ranges = ranges
        if ranges:
            self.min = ranges[0][0]
            self.max = ranges[-1][1]
            if len(ranges) == 1:
                self.size = self.max - self.min + 1
            else:
                self.size = sum(hi - lo + 1 for lo, hi in ranges)
        else:
            self.min = None
            self.max = None
            self.size = 0

    # -- construction -----------------------------------------------------

    @classmethod
    def interval(cls, lo: int, hi: int) -> IntSet:
        if lo > hi:
            return EMPTY
        return cls(((lo, hi),))

    @classmethod
    def of(cls, values: Iterable[int]) -> IntSet:
        return cls(_normalize((v, v) for v in values))

    @classmethod
    def from_ranges(cls, pairs: Iterable[tuple[int, int]]) -> IntSet:
        return cls(_normalize(pairs))

    # -- queries ----------------------------------------------------------

    def __len__(self) -> int:
        return self.size

    def __bool__(self) -> bool:
        return self.size > 0

    def __contains__(self, v: object) -> bool:
        r = self.ranges
        if not r or not isinstance(v, int):
            return False
        if len(r) == 1:
            return r[0][0] <= v <= r[0][1]
        i = bisect_right(r, (v, float("inf"))) - 1
        return i >= 0 and r[i][0] <= v <= r[i][1]

    def __iter__(self) -> Iterator[int]:
        for lo, hi in self.ranges:
            yield from range(lo, hi + 1)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, IntSet):
            return self.ranges == other.ranges
        if isinstance(other, (set, frozenset)):
            return self.size == len(other) and all(v in self for v in other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.ranges)

    def __repr__(self) -> str:
        if not self.ranges:
            return "{}"
        if len(self.ranges) == 1 and self.size > 2:
            return f"[{self.min}..{self.max}]"
        if self.size <= 12:
            return "{" + ",".join(map(str, self)) + "}"
        return "{" + ",".join(f"{lo}..{hi}" if lo != hi else str(lo) for lo, hi in self.ranges) + "}"

    @property
    def is_range(self) -> bool:
        return len(self.ranges) <= 1

    @property
    def is_fixed(self) -> bool:
        return self.size == 1

    def issubset(self, other: IntSet) -> bool:
        if self.size == 0:
            return True
        if self.size > other.size or self.min < other.min or self.max > other.max:
            return False
        if len(other.ranges) == 1:
            return True
        return self.intersect(other).size == self.size

    def next_geq(self, v: int) -> int | None:
        """Smallest member >= v."""
        for lo, hi in self.ranges:
            if hi >= v:
                return max(lo, v)
        return None

    def next_leq(self, v: int) -> int | None:
        """Largest member <= v."""
        for lo, hi in reversed(self.ranges):
            if lo <= v:
                return min(hi, v)
        return None

    # -- set algebra ------------------------------------------------------

    def clamp(self, lo: int, hi: int) -> IntSet:
        """Intersection with the interval [lo, hi]."""
        r = self.ranges
        if not r or lo > hi:
            return EMPTY if r else self
        if lo <= self.min and hi >= self.max:
            return self
        if len(r) == 1:
            return IntSet.interval(max(lo, r[0][0]), min(hi, r[0][1]))
        out = []
        for a, b in r:
            if b < lo:
                continue
            if a > hi:
                break
            out.append((max(a, lo), min(b, hi)))
        return IntSet(tuple(out))

    def intersect(self, other: IntSet) -> IntSet:
        a, b = self.ranges, other.ranges
        if not a or not b:
            return EMPTY
        if len(b) == 1:
            return self.clamp(b[0][0], b[0][1])
        if len(a) == 1:
            return other.clamp(a[0][0], a[0][1])
        out = []
        i = j = 0
        while i < len(a) and j < len(b):
            lo = max(a[i][0], b[j][0])
            hi = min(a[i][1], b[j][1])
            if lo <= hi:
                out.append((lo, hi))
            if a[i][1] < b[j][1]:
                i += 1
            else:
                j += 1
        return IntSet(tuple(out))

    def union(self, other: IntSet) -> IntSet:
        return IntSet(_normalize(self.ranges + other.ranges))

    def remove(self, v: int) -> IntSet:
        if v not in self:
            return self
        out = []
        for lo, hi in self.ranges:
            if lo <= v <= hi:
                if lo < v:
                    out.append((lo, v - 1))
                if v < hi:
                    out.append((v + 1, hi))
            else:
                out.append((lo, hi))
        return IntSet(tuple(out))

    def difference(self, other: IntSet) -> IntSet:
        if not other.ranges or not self.ranges:
            return self
        if other.max < self.min or other.min > self.max:
            return self
        out = []
        b = other.ranges
        j = 0
        for lo, hi in self.ranges:
            cur = lo
            while j < len(b) and b[j][1] < cur:
                j += 1
            k = j
            while k < len(b) and b[k][0] <= hi:
                if b[k][0] > cur:
                    out.append((cur, b[k][0] - 1))
                cur = max(cur, b[k][1] + 1)
                if cur > hi:
                    break
                k += 1
            if cur <= hi:
                out.append((cur, hi))
        return IntSet(tuple(out))

    def shift(self, c: int) -> IntSet:
        if c == 0:
            return self
        return IntSet(tuple((lo + c, hi + c) for lo, hi in self.ranges))

    def negate(self) -> IntSet:
        return IntSet(tuple((-hi, -lo) for lo, hi in reversed(self.ranges)))


EMPTY = IntSet(())
