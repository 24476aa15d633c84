"""Counting constraints: exactly-m-equal-k and Boolean sums."""

from __future__ import annotations

from typing import Sequence

from ..domain import Domain
from ..events import BC, DMC, LBC, UBC
from .base import Priority, Propagator, PropStatus

__all__ = ["Exactly", "BoolSum"]

FAILED = PropStatus.FAILED
SUBSUMED = PropStatus.SUBSUMED
AT_FIXPOINT = PropStatus.AT_FIXPOINT


class Exactly(Propagator):
    """Exactly ``m`` of ``xs`` take the constant value ``k``.

    ``m`` may itself be one of ``xs``; the propagator then iterates to its
    own fixpoint, since narrowing ``m`` can change the count.
    """

    name = "exactly"
    priority = Priority.LINEAR_HIGH
    idempotent = True

    def __init__(self, xs: Sequence[int], m: int, k: int):
        super().__init__(tuple(xs) + (m,))
        if len(set(xs)) != len(xs):
            raise ValueError("exactly expects distinct counted variables")
        self.xs = tuple(xs)
        self.m = m
        self.k = k
        self.aliased = m in self.xs

    def __repr__(self) -> str:
        return f"exactly(x{self.m}, [{', '.join(f'x{x}' for x in self.xs)}], {self.k})"

    def satisfied(self, values: Sequence[int]) -> bool:
        return sum(1 for v in values[:-1] if v == self.k) == values[-1]

    def propagate(self, d: Domain) -> PropStatus:
        sets = d.sets
        k, m = self.k, self.m
        while True:
            fixed_k = 0
            cand = []
            for x in self.xs:
                s = sets[x]
                if k in s:
                    if s.size == 1:
                        fixed_k += 1
                    else:
                        cand.append(x)
            lo, hi = fixed_k, fixed_k + len(cand)
            before = sets[m]
            if not d.restrict(m, lo, hi):
                return FAILED
            sm = sets[m]
            if self.aliased and m in cand and sm != before:
                continue
            if sm.max == lo:
                for x in cand:
                    if not d.remove(x, k):
                        return FAILED
                return SUBSUMED
            if sm.min == hi:
                for x in cand:
                    if not d.assign(x, k):
                        return FAILED
                return SUBSUMED
            return AT_FIXPOINT

    def subscriptions(self) -> dict[int, int]:
        out = {x: DMC for x in self.xs}
        out[self.m] = out.get(self.m, 0) | BC
        return out

    def monotonic_events(self, d: Domain) -> dict[int, int]:
        sets = d.sets
        k = self.k
        out = {}
        for x in self.xs:
            s = sets[x]
            # decided variables can no longer change the count
            if s.size > 1 and k in s:
                out[x] = DMC
        if sets[self.m].size > 1:
            out[self.m] = out.get(self.m, 0) | BC
        return out


class BoolSum(Propagator):
    """sum(xs) rel k over 0/1 variables, rel in {"<=", ">=", "="}.

    The dynamic event set watches only as many undecided literals as are
    needed to notice the next possible propagation: for ``<=`` with ``r``
    more ones allowed, any ``r`` new ones must hit a watch, so ``u - r + 1``
    of the ``u`` undecided variables are watched for ``lbc``; dually ``>=``
    watches ``r + 1`` variables for ``ubc`` when ``r`` more ones are needed.
    """

    name = "bool_sum"
    priority = Priority.LINEAR_HIGH
    idempotent = True

    def __init__(self, xs: Sequence[int], rel: str, k: int):
        if rel not in ("<=", ">=", "="):
            raise ValueError(f"unsupported relation {rel!r}")
        super().__init__(xs)
        if len(self.vars) != len(self.scope):
            raise ValueError("bool_sum expects distinct variables")
        self.rel = rel
        self.k = k

    def __repr__(self) -> str:
        return f"sum({', '.join(f'x{x}' for x in self.scope)}) {self.rel} {self.k}"

    def satisfied(self, values: Sequence[int]) -> bool:
        t = sum(values)
        if self.rel == "<=":
            return t <= self.k
        if self.rel == ">=":
            return t >= self.k
        return t == self.k

    def _count(self, d: Domain):
        ones = 0
        und = []
        for x in self.scope:
            s = d.sets[x]
            if s.size == 1:
                ones += s.min
            else:
                und.append(x)
        return ones, und

    def propagate(self, d: Domain) -> PropStatus:
        for x in self.scope:
            if not d.restrict(x, 0, 1):
                return FAILED
        ones, und = self._count(d)
        rel, k = self.rel, self.k
        if rel in ("<=", "=") and ones > k:
            d.restrict(self.scope[0], 1, 0)
            return FAILED
        if rel in (">=", "=") and ones + len(und) < k:
            d.restrict(self.scope[0], 1, 0)
            return FAILED
        if rel in ("<=", "=") and ones == k:
            for x in und:
                d.assign(x, 0)
            return SUBSUMED
        if rel in (">=", "=") and ones + len(und) == k:
            for x in und:
                d.assign(x, 1)
            return SUBSUMED
        if rel == "<=" and ones + len(und) <= k:
            return SUBSUMED
        if rel == ">=" and ones >= k:
            return SUBSUMED
        return AT_FIXPOINT

    def subscriptions(self) -> dict[int, int]:
        mask = {"<=": LBC, ">=": UBC, "=": BC}[self.rel]
        return {x: mask for x in self.scope}

    def monotonic_events(self, d: Domain) -> dict[int, int]:
        mask = {"<=": LBC, ">=": UBC, "=": BC}[self.rel]
        return {x: mask for x in self.scope if d.sets[x].size > 1}

    def dynamic_events(self, d: Domain) -> dict[int, int]:
        ones, und = self._count(d)
        r = self.k - ones
        if self.rel == "<=":
            return {x: LBC for x in und[: len(und) - r + 1]}
        if self.rel == ">=":
            return {x: UBC for x in und[: r + 1]}
        return {x: BC for x in und}
