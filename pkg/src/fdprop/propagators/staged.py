"""Ways of combining a cheap and a strong propagator for one constraint.

``Immediate`` runs both in a single application. ``StagedAlldiff`` and
``StagedLinear`` keep a stage per solver state; the engine picks the stage
from the events that woke the propagator and schedules each stage at its
own priority (see ``Engine``).
"""

from __future__ import annotations

from typing import Sequence

from ..domain import Domain
from ..events import BC, FIX
from .alldiff import AlldiffDomain, AlldiffNaive
from .base import Priority, Propagator, PropStatus
from .linear import LinearBounds, LinearDomain

__all__ = ["Immediate", "Staged", "StagedAlldiff", "StagedLinear", "STAGE_A", "STAGE_B"]

STAGE_A = "A"
STAGE_B = "B"


def _merge_subs(a: dict[int, int], b: dict[int, int]) -> dict[int, int]:
    out = dict(a)
    for x, m in b.items():
        out[x] = out.get(x, 0) | m
    return out


class Immediate(Propagator):
    """Applies ``weak`` then ``strong`` as one propagator."""

    name = "immediate"

    def __init__(self, weak: Propagator, strong: Propagator):
        super().__init__(strong.scope)
        self.weak, self.strong = weak, strong
        self.name = f"{weak.name}+{strong.name}"
        self.priority = strong.priority
        self.idempotent = strong.idempotent

    def __repr__(self) -> str:
        return f"immediate({self.strong!r})"

    def propagate(self, d: Domain) -> PropStatus:
        if self.weak.propagate(d) == PropStatus.FAILED or d.failed:
            return PropStatus.FAILED
        # a fixpoint of the stronger propagator is one of the weaker too
        return self.strong.propagate(d)

    def satisfied(self, values: Sequence[int]) -> bool:
        return self.strong.satisfied(values)

    def subscriptions(self) -> dict[int, int]:
        return _merge_subs(self.weak.subscriptions(), self.strong.subscriptions())


class Staged(Propagator):
    """A propagator with a cheap stage A and a strong stage B."""

    staged = True

    def __init__(self, weak: Propagator, strong: Propagator):
        super().__init__(strong.scope)
        self.weak, self.strong = weak, strong
        self.priority = self.stage_priority(STAGE_A)

    def __repr__(self) -> str:
        return f"staged({self.strong!r})"

    def satisfied(self, values: Sequence[int]) -> bool:
        return self.strong.satisfied(values)

    def subscriptions(self) -> dict[int, int]:
        return _merge_subs(self.weak.subscriptions(), self.strong.subscriptions())

    def propagate(self, d: Domain) -> PropStatus:
        if self.weak.propagate(d) == PropStatus.FAILED or d.failed:
            return PropStatus.FAILED
        return self.strong.propagate(d)

    def stage_for(self, mask: int) -> str:
        raise NotImplementedError

    def stage_priority(self, stage: str) -> int:
        raise NotImplementedError

    def run_stage(self, stage: str, d: Domain) -> tuple[PropStatus, str | None]:
        """Run one stage; returns its status and the stage to schedule next."""
        raise NotImplementedError


class StagedAlldiff(Staged):
    """fix events select value elimination, other changes select matching."""

    name = "staged_alldiff"

    def __init__(self, xs: Sequence[int]):
        super().__init__(AlldiffNaive(xs), AlldiffDomain(xs))

    def stage_for(self, mask: int) -> str:
        return STAGE_A if mask & FIX else STAGE_B

    def stage_priority(self, stage: str) -> int:
        return Priority.LINEAR_HIGH if stage == STAGE_A else Priority.QUADRATIC_LOW

    def run_stage(self, stage: str, d: Domain) -> tuple[PropStatus, str | None]:
        if stage == STAGE_A:
            status = self.weak.propagate(d)
            if d.failed or status in (PropStatus.FAILED, PropStatus.SUBSUMED):
                return status if not d.failed else PropStatus.FAILED, None
            return status, STAGE_B
        return self.strong.propagate(d), None


class StagedLinear(Staged):
    """Bound changes select bounds(R) reasoning, other changes select
    domain consistency. After stage A the domain stage is skipped when it
    cannot prune: every variable has a range domain, the bounds stage is at
    its fixpoint and every coefficient is +-1."""

    name = "staged_linear"

    def __init__(self, coeffs: Sequence[int], xs: Sequence[int], k: int, sweep: str = "jacobi"):
        strong = LinearDomain(coeffs, xs, k)
        weak = LinearBounds(coeffs, xs, k, sweep=sweep, priority=Priority.LINEAR_HIGH)
        super().__init__(weak, strong)
        self.unit = all(abs(a) == 1 for a in weak.coeffs)

    def stage_for(self, mask: int) -> str:
        return STAGE_A if mask & BC else STAGE_B

    def stage_priority(self, stage: str) -> int:
        return Priority.LINEAR_HIGH if stage == STAGE_A else Priority.VERYSLOW_LOW

    def run_stage(self, stage: str, d: Domain) -> tuple[PropStatus, str | None]:
        if stage == STAGE_A:
            status = self.weak.propagate(d)
            if d.failed:
                return PropStatus.FAILED, None
            if status == PropStatus.SUBSUMED:
                return status, None
            if (
                status == PropStatus.AT_FIXPOINT
                and self.unit
                and all(d.sets[x].is_range for x in self.vars)
            ):
                return status, None
            return status, STAGE_B
        return self.strong.propagate(d), None
