"""Propagator protocol, statuses and priorities."""

from __future__ import annotations

from enum import IntEnum
from typing import Sequence

from ..domain import Domain
from ..events import DMC

__all__ = ["PropStatus", "Priority", "Propagator", "apply", "unique"]


class PropStatus(IntEnum):
    FAILED = 0
    SUBSUMED = 1
    AT_FIXPOINT = 2
    UNKNOWN = 3


class Priority(IntEnum):
    """The 14-level spectrum; lower runs earlier."""

    UNARY_HIGH = 0
    UNARY_LOW = 1
    BINARY_HIGH = 2
    BINARY_LOW = 3
    TERNARY_HIGH = 4
    TERNARY_LOW = 5
    LINEAR_HIGH = 6
    LINEAR_LOW = 7
    QUADRATIC_HIGH = 8
    QUADRATIC_LOW = 9
    CUBIC_HIGH = 10
    CUBIC_LOW = 11
    VERYSLOW_HIGH = 12
    VERYSLOW_LOW = 13


# base names of the medium (7-level) spectrum
UNARY, BINARY, TERNARY, LINEAR, QUADRATIC, CUBIC, VERYSLOW = range(7)


def unique(xs: Sequence[int]) -> tuple[int, ...]:
    return tuple(dict.fromkeys(xs))


class Propagator:
    """Base class for propagators.

    Subclasses set ``scope`` (the constraint's variable sequence, repeats
    allowed), implement :meth:`propagate` (in place, returning a
    :class:`PropStatus`) and :meth:`satisfied` (the constraint as a
    predicate over values of ``scope``, used by oracles and solution
    checks).
    """

    name = "prop"
    priority: int = Priority.LINEAR_HIGH
    idempotent = False
    staged = False

    def __init__(self, scope: Sequence[int], outputs: Sequence[int] | None = None):
        self.scope = tuple(scope)
        self.vars = unique(self.scope)
        self.outputs = unique(outputs) if outputs is not None else self.vars

    def __repr__(self) -> str:
        return f"{self.name}({', '.join(f'x{x}' for x in self.scope)})"

    def propagate(self, d: Domain) -> PropStatus:
        raise NotImplementedError

    def satisfied(self, values: Sequence[int]) -> bool:
        raise NotImplementedError

    def subscriptions(self) -> dict[int, int]:
        """Static event set: variable -> requested event mask."""
        return {x: DMC for x in self.vars}

    # Hooks for dynamic event sets. ``None`` keeps the current set.
    def monotonic_events(self, d: Domain) -> dict[int, int] | None:
        return None

    def dynamic_events(self, d: Domain) -> dict[int, int] | None:
        return self.monotonic_events(d)

    def unfixed(self, d: Domain) -> int:
        sets = d.sets
        return sum(1 for x in self.vars if sets[x].size > 1)


def apply(f: Propagator, d: Domain) -> tuple[Domain, PropStatus]:
    """Pure application: returns ``(f(d), status)`` leaving ``d`` untouched."""
    out = d.copy()
    status = f.propagate(out)
    if out.failed:
        status = PropStatus.FAILED
    out.log = {}
    return out, status
