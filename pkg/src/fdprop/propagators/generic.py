"""Enumeration-based propagators: the domain-consistent ``dom`` operator and
its bounds(Z) wrapper. They are slow but obviously correct, so the test
suite uses them as oracles for the specialised algorithms."""

from __future__ import annotations

from itertools import product
from math import prod
from typing import Callable, Sequence

from ..domain import Domain
from ..errors import EnumerationCapExceeded
from ..events import BC
from ..intset import IntSet
from .base import Priority, Propagator, PropStatus, unique

__all__ = ["DEFAULT_CAP", "dom_generic", "zbnd_wrap", "DomGeneric", "ZBoundsGeneric"]

DEFAULT_CAP = 10**6

Predicate = Callable[[Sequence[int]], bool]


def _supports(scope, pred, sets, cap):
    vs = unique(scope)
    size = prod(sets[x].size for x in vs)
    if size > cap:
        raise EnumerationCapExceeded(f"{size} assignments over {len(vs)} vars exceeds cap {cap}")
    pos = {x: i for i, x in enumerate(vs)}
    idx = [pos[x] for x in scope]
    seen = [set() for _ in vs]
    count = 0
    for theta in product(*(list(sets[x]) for x in vs)):
        if pred([theta[i] for i in idx]):
            count += 1
            for s, v in zip(seen, theta):
                s.add(v)
    return vs, seen, count, size


def dom_generic(
    scope: Sequence[int], pred: Predicate, d: Domain, cap: int = DEFAULT_CAP
) -> tuple[Domain, PropStatus]:
    """Keep exactly the values that take part in some solution within ``d``."""
    out = d.copy()
    if out.failed:
        return out, PropStatus.FAILED
    vs, seen, count, size = _supports(scope, pred, out.sets, cap)
    if count == 0:
        _wipe(out, vs)
        return out, PropStatus.FAILED
    for x, s in zip(vs, seen):
        out.intersect_var(x, IntSet.of(s))
    out.log = {}
    if count == size or all(out.sets[x].size == 1 for x in vs):
        return out, PropStatus.SUBSUMED
    return out, PropStatus.AT_FIXPOINT


def zbnd_wrap(
    scope: Sequence[int], pred: Predicate, d: Domain, cap: int = DEFAULT_CAP
) -> tuple[Domain, PropStatus]:
    """bounds(Z) propagation: ``d`` meet the hull of dom over the range relaxation."""
    out = d.copy()
    if out.failed:
        return out, PropStatus.FAILED
    vs = unique(scope)
    relaxed = list(out.sets)
    for x in vs:
        s = relaxed[x]
        relaxed[x] = IntSet.interval(s.min, s.max)
    _, seen, count, _ = _supports(scope, pred, relaxed, cap)
    if count == 0:
        _wipe(out, vs)
        return out, PropStatus.FAILED
    exact = True
    for x, s in zip(vs, seen):
        lo, hi = min(s), max(s)
        if not out.restrict(x, lo, hi):
            return out, PropStatus.FAILED
        if out.sets[x].min != lo or out.sets[x].max != hi:
            exact = False
    out.log = {}
    if all(out.sets[x].size == 1 for x in vs):
        # bounds that fell into holes can fix a non-solution
        if not pred([out.sets[x].min for x in scope]):
            _wipe(out, vs)
            return out, PropStatus.FAILED
        return out, PropStatus.SUBSUMED
    # if no bound fell into a hole the result is its own range relaxation's box
    return out, PropStatus.AT_FIXPOINT if exact else PropStatus.UNKNOWN


class DomGeneric(Propagator):
    """Domain-consistent propagator for an arbitrary predicate."""

    name = "dom"
    priority = Priority.VERYSLOW_LOW
    idempotent = True

    def __init__(self, scope: Sequence[int], pred: Predicate, cap: int = DEFAULT_CAP, name: str | None = None):
        super().__init__(scope)
        self.pred = pred
        self.cap = cap
        if name:
            self.name = name

    def propagate(self, d: Domain) -> PropStatus:
        out, status = dom_generic(self.scope, self.pred, d, self.cap)
        _commit(d, out)
        return status

    def satisfied(self, values: Sequence[int]) -> bool:
        return bool(self.pred(values))


class ZBoundsGeneric(DomGeneric):
    """bounds(Z) propagator for an arbitrary predicate."""

    name = "zbnd"
    priority = Priority.VERYSLOW_HIGH
    idempotent = False

    def propagate(self, d: Domain) -> PropStatus:
        out, status = zbnd_wrap(self.scope, self.pred, d, self.cap)
        _commit(d, out)
        return status

    def subscriptions(self) -> dict[int, int]:
        return {x: BC for x in self.vars}


def _wipe(d: Domain, vs) -> None:
    if vs:
        d.sets[vs[0]] = IntSet(())
    d.failed = True
    d.log = {}


def _commit(d: Domain, out: Domain) -> None:
    """Copy the result of a pure computation back into ``d`` through ``_set``."""
    for x, s in enumerate(out.sets):
        if s is not d.sets[x] and s.size != d.sets[x].size:
            d._set(x, s)
    if out.failed:
        d.failed = True
