"""Depth-first search over copied solver states, with branch-and-bound."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .domain import Domain
from .engine import Engine, Space
from .propagators.arith import Member
from .propagators.base import Propagator

__all__ = ["Brancher", "SearchResult", "search", "solve"]

SELECTIONS = ("input_order", "first_unfixed", "min_size")
VALUE_RULES = ("eq_inf_vs_geq", "split_le_ge")


@dataclass(frozen=True)
class Brancher:
    """Variable selection plus a value rule producing covering branches.

    ``input_order`` scans ``vars`` in the given order, ``first_unfixed``
    scans them by variable index and ``min_size`` takes the smallest domain
    (ties broken by position in ``vars``).
    """

    vars: tuple[int, ...] | None = None
    select: str = "input_order"
    value: str = "eq_inf_vs_geq"

    def __post_init__(self):
        if self.select not in SELECTIONS:
            raise ValueError(f"select must be one of {SELECTIONS}")
        if self.value not in VALUE_RULES:
            raise ValueError(f"value must be one of {VALUE_RULES}")

    def _order(self, d: Domain) -> Sequence[int]:
        if self.vars is None:
            return range(len(d))
        if self.select == "first_unfixed":
            return sorted(self.vars)
        return self.vars

    def choose(self, d: Domain) -> int | None:
        sets = d.sets
        best = None
        best_size = None
        for x in self._order(d):
            s = sets[x].size
            if s > 1:
                if self.select != "min_size":
                    return x
                if best_size is None or s < best_size:
                    best, best_size = x, s
        return best

    def branch(self, d: Domain, x: int | None = None) -> list[list[Propagator]]:
        """Branches for the chosen variable, each as a list of propagators."""
        if x is None:
            x = self.choose(d)
        if x is None or d.sets[x].size <= 1:
            raise ValueError("branching requires an unfixed variable")
        s = d.sets[x]
        if self.value == "eq_inf_vs_geq":
            return [[Member.eq(x, s.min)], [Member.geq(x, s.min + 1)]]
        mid = (s.min + s.max) // 2
        return [[Member.leq(x, mid)], [Member.geq(x, mid + 1)]]


@dataclass
class SearchResult:
    outcome: str
    solutions: list[tuple[int, ...]] = field(default_factory=list)
    objective: int | None = None
    complete: bool = True
    stats: dict = field(default_factory=dict)

    @property
    def best(self) -> tuple[int, ...] | None:
        return self.solutions[-1] if self.solutions else None


def search(
    engine: Engine,
    space: Space,
    new: Sequence[int] | Sequence[Propagator] = (),
    brancher: Brancher | None = None,
    mode: str = "first",
    objective: tuple[int, str] | None = None,
    node_limit: int | None = None,
    check: bool = False,
) -> SearchResult:
    """Explore ``space`` after adding ``new``.

    ``mode`` is ``first``, ``all`` or ``best``; ``best`` needs
    ``objective=(var, "min"|"max")`` and, after each solution, constrains
    every node popped later to improve on it. ``node_limit`` bounds the
    number of branching nodes; a truncated run reports ``complete=False``.
    """
    if mode not in ("first", "all", "best"):
        raise ValueError("mode must be first, all or best")
    if mode == "best" and objective is None:
        raise ValueError("best mode needs an objective")
    brancher = brancher or Brancher()
    stats = engine.stats
    sols: list[tuple[int, ...]] = []
    bound: int | None = None
    complete = True
    stack: list[tuple[Space, list]] = [(space, list(new))]
    while stack:
        sp, posts = stack.pop()
        if bound is not None:
            x, sense = objective
            posts = list(posts) + [Member.leq(x, bound - 1) if sense == "min" else Member.geq(x, bound + 1)]
        if not engine.isolv(sp, posts):
            stats.failures += 1
            continue
        d = sp.domain
        x = brancher.choose(d)
        if x is None:
            sol = d.assignment() if d.all_fixed() else tuple(d.sets[v].min for v in brancher._order(d))
            if check:
                _check_solution(sp, d)
            sols.append(sol)
            stats.solutions += 1
            if mode == "first":
                break
            if mode == "best":
                bound = d.sets[objective[0]].min
            continue
        if node_limit is not None and stats.nodes >= node_limit:
            complete = False
            break
        stats.nodes += 1
        branches = brancher.branch(d, x)
        for b in reversed(branches[1:]):
            stack.append((sp.copy(), b))
        stack.append((sp, branches[0]))
    if mode == "best":
        outcome = "optimal" if sols and complete else ("sat" if sols else "unsat")
    else:
        outcome = "sat" if sols else "unsat"
    if not sols and not complete:
        outcome = "unknown"
    return SearchResult(outcome, sols, bound, complete, stats.snapshot())


def _check_solution(sp: Space, d: Domain) -> None:
    for f in sp.props:
        vals = [d.sets[x].min for x in f.scope]
        if all(d.sets[x].size == 1 for x in f.scope) and not f.satisfied(vals):
            raise AssertionError(f"solution violates {f!r}")


def solve(
    domain: Domain,
    props: Sequence[Propagator],
    engine: Engine | None = None,
    **kw,
) -> SearchResult:
    """Search from scratch: post ``props`` on ``domain`` and explore."""
    engine = engine or Engine()
    space = Space(domain.copy())
    pids = engine.post(space, props)
    return search(engine, space, pids, **kw)
