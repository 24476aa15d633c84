"""Model construction: variables, constraints, and compilation of each
constraint into propagators for a chosen combination mode."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .domain import BOUND_LIMIT, Domain
from .errors import ModelError
from .intset import IntSet
from .propagators import (
    AlldiffBounds,
    AlldiffDomain,
    AlldiffNaive,
    Immediate,
    LinearBounds,
    LinearDomain,
    Propagator,
    StagedAlldiff,
    StagedLinear,
)
from .search import Brancher

__all__ = ["Model", "Combo", "COMBINATIONS"]

COMBINATIONS = ("single", "immediate", "multiple", "staged")


@dataclass(frozen=True)
class Combo:
    """A constraint with a cheap and a strong propagator.

    ``single`` keeps only the strong one, ``immediate`` fuses them,
    ``multiple`` posts both and ``staged`` posts one staged propagator.
    """

    weak: Callable[[], Propagator]
    strong: Callable[[], Propagator]
    staged: Callable[[], Propagator]

    def compile(self, mode: str) -> list[Propagator]:
        if mode == "single":
            return [self.strong()]
        if mode == "immediate":
            return [Immediate(self.weak(), self.strong())]
        if mode == "multiple":
            return [self.weak(), self.strong()]
        if mode == "staged":
            return [self.staged()]
        raise ModelError(f"unknown combination {mode!r}")


class Model:
    def __init__(self, name: str = "model"):
        self.name = name
        self.names: list[str] = []
        self.init: list[IntSet] = []
        self.items: list[Propagator | Combo] = []
        self.brancher = Brancher()
        self.mode = "first"
        self.objective: tuple[int, str] | None = None
        self.outputs: list[int] | None = None

    # -- variables ------------------------------------------------------------

    def var(self, name: str, lo: int | Iterable[int], hi: int | None = None) -> int:
        if hi is None:
            s = IntSet.of(lo)
        else:
            s = IntSet.interval(lo, hi)
        if s.size and (s.min < -BOUND_LIMIT or s.max > BOUND_LIMIT):
            raise ModelError(f"initial bounds of {name} exceed +-2**32")
        self.names.append(name)
        self.init.append(s)
        return len(self.init) - 1

    def vars(self, prefix: str, n: int, lo: int, hi: int) -> list[int]:
        return [self.var(f"{prefix}{i}", lo, hi) for i in range(n)]

    def view(self, solution: Sequence[int]) -> tuple[int, ...]:
        """The output variables' values of a full solution."""
        if self.outputs is None:
            return tuple(solution)
        return tuple(solution[x] for x in self.outputs)

    def domain(self) -> Domain:
        return Domain(self.init)

    # -- constraints ----------------------------------------------------------

    def post(self, *items: Propagator | Combo) -> None:
        self.items.extend(items)

    def alldiff(self, xs: Sequence[int], strength: str = "naive", offsets: Sequence[int] | None = None) -> None:
        xs = tuple(xs)
        if strength == "naive":
            self.post(AlldiffNaive(xs, offsets))
        elif offsets is not None:
            raise ModelError("offsets are only supported by the naive alldifferent")
        elif strength == "bounds":
            self.post(AlldiffBounds(xs))
        elif strength == "domain":
            self.post(Combo(lambda: AlldiffNaive(xs), lambda: AlldiffDomain(xs), lambda: StagedAlldiff(xs)))
        else:
            raise ModelError(f"unknown alldifferent strength {strength!r}")

    def linear(self, coeffs: Sequence[int], xs: Sequence[int], k: int, strength: str = "bounds", **kw) -> None:
        coeffs, xs = tuple(coeffs), tuple(xs)
        if strength == "bounds":
            self.post(LinearBounds(coeffs, xs, k, **kw))
        elif strength == "domain":
            self.post(Combo(
                lambda: LinearBounds(coeffs, xs, k),
                lambda: LinearDomain(coeffs, xs, k),
                lambda: StagedLinear(coeffs, xs, k),
            ))
        else:
            raise ModelError(f"unknown linear strength {strength!r}")

    # -- compilation ----------------------------------------------------------

    def propagators(self, combination: str = "single") -> list[Propagator]:
        out: list[Propagator] = []
        for item in self.items:
            if isinstance(item, Combo):
                out.extend(item.compile(combination))
            else:
                out.append(item)
        return out

    def has_combos(self) -> bool:
        return any(isinstance(i, Combo) for i in self.items)

    def constraints(self) -> list[Propagator]:
        """One checking propagator per constraint (for solution checks)."""
        return self.propagators("single")

    def check(self, assignment: Sequence[int]) -> bool:
        for f in self.constraints():
            if not f.satisfied([assignment[x] for x in f.scope]):
                return False
        return all(v in s for v, s in zip(assignment, self.init))
