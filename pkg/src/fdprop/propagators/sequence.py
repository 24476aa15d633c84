"""Sequence constraints: regular (DFA membership) and lexicographic order."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from ..domain import Domain
from ..errors import MalformedAutomaton
from ..events import DMC, LBC, UBC
from ..intset import IntSet
from .base import Priority, Propagator, PropStatus

__all__ = ["DFA", "Regular", "Lex"]

FAILED = PropStatus.FAILED
SUBSUMED = PropStatus.SUBSUMED
AT_FIXPOINT = PropStatus.AT_FIXPOINT
UNKNOWN = PropStatus.UNKNOWN


@dataclass(frozen=True)
class DFA:
    """Deterministic automaton; missing transitions go to an implicit dead state."""

    start: int
    accepting: frozenset[int]
    delta: Mapping[tuple[int, int], int] = field(default_factory=dict)

    @classmethod
    def build(cls, start: int, accepting: Iterable[int], edges: Iterable[tuple[int, int, int]]) -> DFA:
        delta: dict[tuple[int, int], int] = {}
        for q, v, r in edges:
            if delta.setdefault((q, v), r) != r:
                raise MalformedAutomaton(f"nondeterministic transition from {q} on {v}")
        return cls(start, frozenset(accepting), delta)

    def accepts(self, word: Sequence[int]) -> bool:
        q = self.start
        for v in word:
            q = self.delta.get((q, v))
            if q is None:
                return False
        return q in self.accepting

    def out_edges(self) -> dict[int, list[tuple[int, int]]]:
        out: dict[int, list[tuple[int, int]]] = {}
        for (q, v), r in self.delta.items():
            out.setdefault(q, []).append((v, r))
        for lst in out.values():
            lst.sort()
        return out

    @classmethod
    def from_runs(cls, runs: Sequence[int]) -> DFA:
        """Automaton for a nonogram line: 0* b1 0+ b2 ... 0*, with runs of 1s."""
        edges = []
        q = 0
        edges.append((0, 0, 0))
        for i, r in enumerate(runs):
            for j in range(r):
                edges.append((q, 1, q + 1))
                q += 1
            if i < len(runs) - 1:
                edges.append((q, 0, q + 1))
                q += 1
                edges.append((q, 0, q))
        edges.append((q, 0, q + 1) if runs else (0, 0, 0))
        if runs:
            edges.append((q + 1, 0, q + 1))
            accepting = {q, q + 1}
        else:
            accepting = {0}
        return cls.build(0, accepting, set(edges))


class Regular(Propagator):
    """``xs`` spells a word accepted by ``dfa``.

    One forward/backward pass over the layered graph is domain consistent
    when the variables are distinct. A repeated variable only sees the
    intersection of its per-position supports, which can invalidate paths
    of the pass itself, so in that case a pruning pass reports ``UNKNOWN``.
    """

    name = "regular"
    priority = Priority.VERYSLOW_HIGH

    def __init__(self, xs: Sequence[int], dfa: DFA):
        super().__init__(xs)
        self.dfa = dfa
        self.edges = dfa.out_edges()
        self.aliased = len(self.vars) != len(self.scope)
        self.idempotent = not self.aliased
        if not self._has_word():
            raise MalformedAutomaton(f"no accepted word of length {len(self.scope)}")

    def _has_word(self) -> bool:
        layer = {self.dfa.start}
        for _ in self.scope:
            layer = {r for q in layer for _, r in self.edges.get(q, ())}
        return bool(layer & self.dfa.accepting)

    def satisfied(self, values: Sequence[int]) -> bool:
        return self.dfa.accepts(values)

    def subscriptions(self) -> dict[int, int]:
        return {x: DMC for x in self.vars}

    def propagate(self, d: Domain) -> PropStatus:
        sets = d.sets
        xs = self.scope
        n = len(xs)
        edges = self.edges
        fwd = [{self.dfa.start}]
        for x in xs:
            s = sets[x]
            nxt = set()
            for q in fwd[-1]:
                for v, r in edges.get(q, ()):
                    if v in s:
                        nxt.add(r)
            fwd.append(nxt)
        alive = fwd[n] & self.dfa.accepting
        if not alive:
            d.restrict(xs[0], 1, 0)
            return FAILED
        support: dict[int, set[int] | None] = {x: None for x in self.vars}
        for i in range(n - 1, -1, -1):
            x = xs[i]
            s = sets[x]
            vals = set()
            prev = set()
            for q in fwd[i]:
                for v, r in edges.get(q, ()):
                    if r in alive and v in s:
                        vals.add(v)
                        prev.add(q)
            alive = prev
            cur = support[x]
            support[x] = vals if cur is None else cur & vals
        changed = False
        for x, vals in support.items():
            if len(vals) != sets[x].size:
                changed = True
                if not d.intersect_var(x, IntSet.of(vals)):
                    return FAILED
        if all(sets[x].size == 1 for x in self.vars):
            return SUBSUMED
        if self.aliased and changed:
            return UNKNOWN
        return AT_FIXPOINT


class Lex(Propagator):
    """``xs`` <=_lex ``ys``.

    Scans for the first position where the pair is not already forced
    equal, prunes it to ``x <= y`` and makes it strict when the rest of the
    sequences cannot be ordered non-strictly. The scan repeats until stable,
    so the propagator is idempotent.
    """

    name = "lex"
    priority = Priority.LINEAR_HIGH
    idempotent = True

    def __init__(self, xs: Sequence[int], ys: Sequence[int]):
        if len(xs) != len(ys):
            raise ValueError("lex needs sequences of equal length")
        super().__init__(tuple(xs) + tuple(ys))
        self.xs = tuple(xs)
        self.ys = tuple(ys)

    def satisfied(self, values: Sequence[int]) -> bool:
        n = len(self.xs)
        return tuple(values[:n]) <= tuple(values[n:])

    def subscriptions(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for x, y in zip(self.xs, self.ys):
            if x != y:
                out[x] = out.get(x, 0) | LBC
                out[y] = out.get(y, 0) | UBC
        return out

    def _alpha(self, d: Domain) -> int:
        sets = d.sets
        i = 0
        for x, y in zip(self.xs, self.ys):
            if x != y and not (sets[x].size == 1 and sets[y].size == 1 and sets[x].min == sets[y].min):
                break
            i += 1
        return i

    def _tail_ok(self, d: Domain, start: int) -> bool:
        """Can positions ``start..`` be ordered non-strictly under the bounds?"""
        sets = d.sets
        for x, y in zip(self.xs[start:], self.ys[start:]):
            if x == y:
                continue
            a, b = sets[x].min, sets[y].max
            if a < b:
                return True
            if a > b:
                return False
        return True

    def propagate(self, d: Domain) -> PropStatus:
        sets = d.sets
        n = len(self.xs)
        while True:
            a = self._alpha(d)
            if a == n:
                return SUBSUMED
            x, y = self.xs[a], self.ys[a]
            strict = not self._tail_ok(d, a + 1)
            off = 1 if strict else 0
            before = (sets[x].size, sets[y].size)
            if not d.set_max(x, sets[y].max - off) or not d.set_min(y, sets[x].min + off):
                return FAILED
            if sets[x].max < sets[y].min:
                return SUBSUMED
            # a variable shared with the tail may need another round
            if (sets[x].size, sets[y].size) == before:
                return AT_FIXPOINT

    def monotonic_events(self, d: Domain) -> dict[int, int]:
        a = self._alpha(d)
        out: dict[int, int] = {}
        for x, y in zip(self.xs[a:], self.ys[a:]):
            if x != y:
                out[x] = out.get(x, 0) | LBC
                out[y] = out.get(y, 0) | UBC
        return out
