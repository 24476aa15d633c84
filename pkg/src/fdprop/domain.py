"""The variable store: a total map from variable indices to integer sets."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .events import DMC, FIX, LBC, UBC
from .intset import EMPTY, IntSet

__all__ = [
    "BOUND_LIMIT",
    "ChangeRecord",
    "Domain",
    "intersect",
    "is_stronger",
    "range_relax",
    "bounds",
    "tighten",
    "is_fixed",
]

# initial bounds are kept inside +-2**32 so linear sums stay exact in 64 bits
BOUND_LIMIT = 2**32


@dataclass(frozen=True)
class ChangeRecord:
    var: int
    old_min: int | None
    old_max: int | None
    old_size: int
    new_min: int | None
    new_max: int | None
    new_size: int


class Domain:
    """Mutable per-variable integer sets plus a failure flag.

    Every mutation goes through :meth:`_set`, which ORs the raised events
    into ``log`` (variable -> event mask). The engine drains ``log`` after
    each propagator run; by the composition law for events the accumulated
    mask equals the classification of the composite change.
    """

    __slots__ = ("sets", "failed", "log")

    def __init__(self, sets: Iterable[IntSet] = ()):
        self.sets: list[IntSet] = list(sets)
        self.failed = any(s.size == 0 for s in self.sets)
        self.log: dict[int, int] = {}

    @classmethod
    def from_bounds(cls, bounds: Iterable[tuple[int, int]]) -> Domain:
        return cls(IntSet.interval(lo, hi) for lo, hi in bounds)

    @classmethod
    def from_values(cls, values: Iterable[Iterable[int]]) -> Domain:
        return cls(IntSet.of(v) for v in values)

    def copy(self) -> Domain:
        d = Domain.__new__(Domain)
        d.sets = self.sets.copy()
        d.failed = self.failed
        d.log = {}
        return d

    def add_var(self, s: IntSet) -> int:
        self.sets.append(s)
        if s.size == 0:
            self.failed = True
        return len(self.sets) - 1

    def __len__(self) -> int:
        return len(self.sets)

    def __getitem__(self, x: int) -> IntSet:
        return self.sets[x]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Domain):
            return NotImplemented
        if self.failed and other.failed:
            return True
        return self.failed == other.failed and self.sets == other.sets

    def __repr__(self) -> str:
        inner = ", ".join(f"x{i}:{s!r}" for i, s in enumerate(self.sets))
        return f"Domain({inner}{', failed' if self.failed else ''})"

    # -- queries ----------------------------------------------------------

    def min(self, x: int) -> int:
        return self.sets[x].min

    def max(self, x: int) -> int:
        return self.sets[x].max

    def size(self, x: int) -> int:
        return self.sets[x].size

    def is_fixed(self, x: int) -> bool:
        return self.sets[x].size == 1

    def value(self, x: int) -> int:
        s = self.sets[x]
        assert s.size == 1, f"x{x} is not fixed"
        return s.min

    def all_fixed(self, xs: Iterable[int] | None = None) -> bool:
        sets = self.sets
        if xs is None:
            return all(s.size == 1 for s in sets)
        return all(sets[x].size == 1 for x in xs)

    def assignment(self) -> tuple[int, ...]:
        return tuple(s.min for s in self.sets)

    # -- mutation ---------------------------------------------------------

    def _set(self, x: int, new: IntSet) -> bool:
        old = self.sets[x]
        if new.size == old.size:
            return True
        self.sets[x] = new
        if new.size == 0:
            self.failed = True
            self.log[x] = self.log.get(x, 0) | DMC
            return False
        mask = DMC
        if new.min > old.min:
            mask |= LBC
        if new.max < old.max:
            mask |= UBC
        if new.size == 1:
            mask |= FIX
        log = self.log
        log[x] = log.get(x, 0) | mask
        return True

    def restrict(self, x: int, lo: int, hi: int) -> bool:
        """Intersect D(x) with [lo, hi]; returns False iff the domain failed."""
        s = self.sets[x]
        if lo <= s.min and hi >= s.max:
            return True
        return self._set(x, s.clamp(lo, hi))

    def set_min(self, x: int, lo: int) -> bool:
        s = self.sets[x]
        if lo <= s.min:
            return True
        return self._set(x, s.clamp(lo, s.max))

    def set_max(self, x: int, hi: int) -> bool:
        s = self.sets[x]
        if hi >= s.max:
            return True
        return self._set(x, s.clamp(s.min, hi))

    def remove(self, x: int, v: int) -> bool:
        s = self.sets[x]
        if v < s.min or v > s.max:
            return True
        return self._set(x, s.remove(v))

    def remove_set(self, x: int, vs: IntSet) -> bool:
        return self._set(x, self.sets[x].difference(vs))

    def assign(self, x: int, v: int) -> bool:
        s = self.sets[x]
        if v in s:
            return self._set(x, IntSet.interval(v, v))
        return self._set(x, EMPTY)

    def intersect_var(self, x: int, vs: IntSet) -> bool:
        return self._set(x, self.sets[x].intersect(vs))

    def tighten(self, x: int, s: IntSet) -> ChangeRecord | None:
        """In-place ``D(x) := D(x) & s``; returns the change or ``None``."""
        old = self.sets[x]
        self.intersect_var(x, s)
        new = self.sets[x]
        if new.size == old.size:
            return None
        return ChangeRecord(x, old.min, old.max, old.size, new.min, new.max, new.size)

    def drain(self) -> dict[int, int]:
        log = self.log
        self.log = {}
        return log


# -- value-level operations on whole domains --------------------------------


def intersect(d1: Domain, d2: Domain) -> Domain:
    assert len(d1) == len(d2)
    return Domain(a.intersect(b) for a, b in zip(d1.sets, d2.sets))


def is_stronger(d1: Domain, d2: Domain) -> bool:
    """``d1`` is stronger than (a pointwise subset of) ``d2``."""
    assert len(d1) == len(d2)
    return all(a.issubset(b) for a, b in zip(d1.sets, d2.sets))


def range_relax(d: Domain) -> Domain:
    assert not d.failed
    return Domain(s if s.is_range else IntSet.interval(s.min, s.max) for s in d.sets)


def bounds(d: Domain, x: int) -> tuple[int, int]:
    s = d.sets[x]
    assert s.size, f"bounds of empty x{x}"
    return s.min, s.max


def tighten(d: Domain, x: int, s: IntSet) -> tuple[Domain, ChangeRecord | None]:
    out = d.copy()
    return out, out.tighten(x, s)


def is_fixed(d: Domain, x: int) -> bool:
    return d.sets[x].size == 1


def restrict_to(d: Domain, xs: Sequence[int], values: Sequence[int]) -> Domain:
    """Copy of ``d`` with each ``xs[i]`` fixed to ``values[i]``."""
    out = d.copy()
    for x, v in zip(xs, values):
        out.sets[x] = IntSet.interval(v, v)
    return out
