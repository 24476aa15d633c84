"""Small arithmetic propagators: unary membership, binary (dis)equalities
with offsets, even, abs, multiplication, guarded inequality, minimum."""

from __future__ import annotations

from typing import Sequence

from ..domain import Domain
from ..events import BC, FIX, LBC, UBC
from ..intset import IntSet
from .base import Priority, Propagator, PropStatus

__all__ = [
    "Member",
    "LeqOffset",
    "NeqOffset",
    "Even",
    "Abs",
    "Mult",
    "GuardedLeq",
    "MinProp",
    "ceil_div",
    "floor_div",
]

FAILED = PropStatus.FAILED
SUBSUMED = PropStatus.SUBSUMED
AT_FIXPOINT = PropStatus.AT_FIXPOINT
UNKNOWN = PropStatus.UNKNOWN


def floor_div(a: int, b: int) -> int:
    return a // b


def ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


class Member(Propagator):
    """x in S. Used for branching decisions and objective bounds."""

    name = "member"
    priority = Priority.UNARY_HIGH
    idempotent = True

    def __init__(self, x: int, values: IntSet):
        super().__init__((x,))
        self.x = x
        self.values = values

    def __repr__(self) -> str:
        return f"x{self.x} in {self.values!r}"

    @classmethod
    def eq(cls, x: int, v: int) -> Member:
        return cls(x, IntSet.interval(v, v))

    @classmethod
    def geq(cls, x: int, v: int) -> Member:
        return cls(x, IntSet.interval(v, 2**62))

    @classmethod
    def leq(cls, x: int, v: int) -> Member:
        return cls(x, IntSet.interval(-(2**62), v))

    def propagate(self, d: Domain) -> PropStatus:
        if not d.intersect_var(self.x, self.values):
            return FAILED
        return SUBSUMED

    def satisfied(self, values: Sequence[int]) -> bool:
        return values[0] in self.values


class LeqOffset(Propagator):
    """x <= y + c."""

    name = "leq"
    priority = Priority.BINARY_HIGH
    idempotent = True

    def __init__(self, x: int, y: int, c: int = 0):
        super().__init__((x, y))
        self.x, self.y, self.c = x, y, c

    def __repr__(self) -> str:
        return f"x{self.x} <= x{self.y} + {self.c}"

    def propagate(self, d: Domain) -> PropStatus:
        x, y, c = self.x, self.y, self.c
        if x == y:
            return SUBSUMED if c >= 0 else (d.restrict(x, 1, 0) or FAILED)
        if not d.set_max(x, d.sets[y].max + c):
            return FAILED
        if not d.set_min(y, d.sets[x].min - c):
            return FAILED
        if d.sets[x].max <= d.sets[y].min + c:
            return SUBSUMED
        return AT_FIXPOINT

    def satisfied(self, values: Sequence[int]) -> bool:
        return values[0] <= values[1] + self.c

    def subscriptions(self) -> dict[int, int]:
        if self.x == self.y:
            return {}
        return {self.x: LBC, self.y: UBC}


class NeqOffset(Propagator):
    """x != y + c; prunes only once one side is fixed."""

    name = "neq"
    priority = Priority.BINARY_HIGH
    idempotent = True

    def __init__(self, x: int, y: int, c: int = 0):
        super().__init__((x, y))
        self.x, self.y, self.c = x, y, c

    def __repr__(self) -> str:
        return f"x{self.x} != x{self.y} + {self.c}"

    def propagate(self, d: Domain) -> PropStatus:
        x, y, c = self.x, self.y, self.c
        if x == y:
            return SUBSUMED if c != 0 else (d.restrict(x, 1, 0) or FAILED)
        sx, sy = d.sets[x], d.sets[y]
        if sy.size == 1:
            return SUBSUMED if d.remove(x, sy.min + c) else FAILED
        if sx.size == 1:
            return SUBSUMED if d.remove(y, sx.min - c) else FAILED
        if sx.max < sy.min + c or sx.min > sy.max + c:
            return SUBSUMED
        return AT_FIXPOINT

    def satisfied(self, values: Sequence[int]) -> bool:
        return values[0] != values[1] + self.c

    def subscriptions(self) -> dict[int, int]:
        if self.x == self.y:
            return {}
        return {self.x: FIX, self.y: FIX}


class Even(Propagator):
    """x is even; bounds only, so holes can leave it short of fixpoint."""

    name = "even"
    priority = Priority.UNARY_HIGH

    def __init__(self, x: int):
        super().__init__((x,))
        self.x = x

    def propagate(self, d: Domain) -> PropStatus:
        x = self.x
        s = d.sets[x]
        lo = 2 * ceil_div(s.min, 2)
        hi = 2 * floor_div(s.max, 2)
        if not d.restrict(x, lo, hi):
            return FAILED
        s = d.sets[x]
        if s.size == 1:
            return SUBSUMED
        if s.min % 2 == 0 and s.max % 2 == 0:
            return AT_FIXPOINT
        return UNKNOWN

    def satisfied(self, values: Sequence[int]) -> bool:
        return values[0] % 2 == 0

    def subscriptions(self) -> dict[int, int]:
        return {self.x: BC}


class Abs(Propagator):
    """y = |x|, bounds reasoning iterated to its own fixpoint."""

    name = "abs"
    priority = Priority.BINARY_HIGH
    idempotent = True

    def __init__(self, x: int, y: int):
        super().__init__((x, y))
        self.x, self.y = x, y

    def propagate(self, d: Domain) -> PropStatus:
        x, y = self.x, self.y
        sets = d.sets
        while True:
            before = (sets[x].size, sets[y].size)
            sx = sets[x]
            if sx.min >= 0:
                lo, hi = sx.min, sx.max
            elif sx.max <= 0:
                lo, hi = -sx.max, -sx.min
            else:
                lo, hi = 0, max(-sx.min, sx.max)
            if not d.restrict(y, lo, hi):
                return FAILED
            sy = sets[y]
            if not d.restrict(x, -sy.max, sy.max):
                return FAILED
            if sy.min > 0:
                sx = sets[x]
                if sx.min > -sy.min and not d.set_min(x, sy.min):
                    return FAILED
                sx = sets[x]
                if sx.max < sy.min and not d.set_max(x, -sy.min):
                    return FAILED
            if (sets[x].size, sets[y].size) == before:
                break
        if sets[x].size == 1 and sets[y].size == 1:
            return SUBSUMED
        return AT_FIXPOINT

    def satisfied(self, values: Sequence[int]) -> bool:
        return values[1] == abs(values[0])

    def subscriptions(self) -> dict[int, int]:
        return {self.x: BC, self.y: BC}


def _div_bounds(zlo: int, zhi: int, ylo: int, yhi: int) -> tuple[int, int] | None:
    """Integer hull of {z / y : z in [zlo,zhi], y in [ylo,yhi]}, 0 not in y."""
    from fractions import Fraction

    qs = [Fraction(a, b) for a in (zlo, zhi) for b in (ylo, yhi)]
    lo, hi = min(qs), max(qs)
    return -((-lo.numerator) // lo.denominator), hi.numerator // hi.denominator


class Mult(Propagator):
    """x * y = z with bounds(R) reasoning; one pass per call."""

    name = "mult"
    priority = Priority.TERNARY_HIGH

    def __init__(self, x: int, y: int, z: int):
        super().__init__((x, y, z))
        self.x, self.y, self.z = x, y, z

    def propagate(self, d: Domain) -> PropStatus:
        x, y, z = self.x, self.y, self.z
        sets = d.sets
        before = tuple(sets[v].size for v in self.vars)
        sx, sy = sets[x], sets[y]
        if x == y:
            if sx.min >= 0:
                lo, hi = sx.min * sx.min, sx.max * sx.max
            elif sx.max <= 0:
                lo, hi = sx.max * sx.max, sx.min * sx.min
            else:
                lo, hi = 0, max(sx.min * sx.min, sx.max * sx.max)
        else:
            ps = (sx.min * sy.min, sx.min * sy.max, sx.max * sy.min, sx.max * sy.max)
            lo, hi = min(ps), max(ps)
        if not d.restrict(z, lo, hi):
            return FAILED
        for a, b in ((x, y), (y, x)):
            sb, sz = sets[b], sets[z]
            if sb.min > 0 or sb.max < 0:
                if a == b:
                    # x*x = z with x of fixed sign
                    r = _isqrt_bounds(sz.min, sz.max)
                    if r is None:
                        return d.restrict(a, 1, 0) and FAILED
                    rlo, rhi = r
                    ok = d.restrict(a, rlo, rhi) if sb.min > 0 else d.restrict(a, -rhi, -rlo)
                    if not ok:
                        return FAILED
                    continue
                qlo, qhi = _div_bounds(sz.min, sz.max, sb.min, sb.max)
                if not d.restrict(a, qlo, qhi):
                    return FAILED
            if x == y:
                break
        if all(sets[v].size == 1 for v in self.vars):
            # one pass can fix all three from stale bounds
            if sets[self.x].min * sets[self.y].min != sets[self.z].min:
                d.restrict(self.z, 1, 0)
                return FAILED
            return SUBSUMED
        if tuple(sets[v].size for v in self.vars) == before:
            return AT_FIXPOINT
        return UNKNOWN

    def satisfied(self, values: Sequence[int]) -> bool:
        return values[0] * values[1] == values[2]

    def subscriptions(self) -> dict[int, int]:
        return {v: BC for v in self.vars}


def _isqrt_bounds(lo: int, hi: int) -> tuple[int, int] | None:
    from math import isqrt

    lo = max(lo, 0)
    if hi < 0:
        return None
    r_hi = isqrt(hi)
    r_lo = isqrt(lo)
    if r_lo * r_lo < lo:
        r_lo += 1
    if r_lo > r_hi:
        return None
    return r_lo, r_hi


class GuardedLeq(Propagator):
    """(g <= t) -> (x <= y + c)."""

    name = "guarded_leq"
    priority = Priority.TERNARY_HIGH
    idempotent = True

    def __init__(self, g: int, t: int, x: int, y: int, c: int):
        super().__init__((g, x, y))
        self.g, self.t, self.x, self.y, self.c = g, t, x, y, c

    def __repr__(self) -> str:
        return f"x{self.g} <= {self.t} -> x{self.x} <= x{self.y} + {self.c}"

    def propagate(self, d: Domain) -> PropStatus:
        # Subsumption is only reported once the guard is false; an entailed
        # consequent is reported as a plain fixpoint.
        g, x, y, c = self.g, self.x, self.y, self.c
        sets = d.sets
        if sets[g].min > self.t:
            return SUBSUMED
        if sets[x].max <= sets[y].min + c:
            return AT_FIXPOINT
        if sets[g].max <= self.t:
            if not d.set_max(x, sets[y].max + c) or not d.set_min(y, sets[x].min - c):
                return FAILED
            return AT_FIXPOINT
        if sets[x].min > sets[y].max + c:
            return SUBSUMED if d.set_min(g, self.t + 1) else FAILED
        return AT_FIXPOINT

    def satisfied(self, values: Sequence[int]) -> bool:
        g, x, y = values
        return g > self.t or x <= y + self.c

    def subscriptions(self) -> dict[int, int]:
        out = {self.g: UBC}
        out[self.x] = out.get(self.x, 0) | LBC
        out[self.y] = out.get(self.y, 0) | UBC
        return out


class MinProp(Propagator):
    """x0 = min(x1, x2).

    The three bound rules are iterated until stable, which makes the
    propagator idempotent even when bounds land in domain holes.
    """

    name = "min"
    priority = Priority.TERNARY_HIGH
    idempotent = True

    def __init__(self, x0: int, x1: int, x2: int):
        super().__init__((x0, x1, x2))
        self.x0, self.x1, self.x2 = x0, x1, x2

    def propagate(self, d: Domain) -> PropStatus:
        x0, x1, x2 = self.x0, self.x1, self.x2
        sets = d.sets
        while True:
            before = (sets[x0].size, sets[x1].size, sets[x2].size)
            s1, s2 = sets[x1], sets[x2]
            if not d.restrict(x0, min(s1.min, s2.min), min(s1.max, s2.max)):
                return FAILED
            lo = sets[x0].min
            if not d.set_min(x1, lo) or not d.set_min(x2, lo):
                return FAILED
            if (sets[x0].size, sets[x1].size, sets[x2].size) == before:
                break
        if sets[x0].size == 1 and sets[x1].size == 1 and sets[x2].size == 1:
            return SUBSUMED
        return AT_FIXPOINT

    def satisfied(self, values: Sequence[int]) -> bool:
        return values[0] == min(values[1], values[2])

    def subscriptions(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for v, m in ((self.x0, LBC), (self.x1, BC), (self.x2, BC)):
            out[v] = out.get(v, 0) | m
        return out

    def _excluded(self, d: Domain, xi: int) -> bool:
        # x_i can no longer be the minimum, so its changes never propagate
        return d.sets[xi].min > d.sets[self.x0].max

    def monotonic_events(self, d: Domain) -> dict[int, int]:
        out = {self.x0: LBC}
        for xi in (self.x1, self.x2):
            if not self._excluded(d, xi):
                out[xi] = out.get(xi, 0) | BC
        return out

    def dynamic_events(self, d: Domain) -> dict[int, int]:
        out = {self.x0: LBC}
        live = [xi for xi in (self.x1, self.x2) if not self._excluded(d, xi)]
        for xi in live:
            out[xi] = out.get(xi, 0) | UBC
        if live:
            # only the argument with the smallest lower bound can raise min
            low = min(live, key=lambda v: d.sets[v].min)
            out[low] = out.get(low, 0) | LBC
        return out
