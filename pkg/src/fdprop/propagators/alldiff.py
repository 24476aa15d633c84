"""alldifferent propagators: value elimination, bounds(Z) via Hall intervals,
and domain consistency via matching."""

from __future__ import annotations

from typing import Sequence

from ..domain import Domain
from ..events import BC, DMC, FIX
from ..intset import IntSet
from .base import Priority, Propagator, PropStatus

__all__ = ["AlldiffNaive", "AlldiffBounds", "AlldiffDomain", "hall_bounds", "regin_supports"]

FAILED = PropStatus.FAILED
SUBSUMED = PropStatus.SUBSUMED
AT_FIXPOINT = PropStatus.AT_FIXPOINT
UNKNOWN = PropStatus.UNKNOWN


class _Alldiff(Propagator):
    def __init__(self, xs: Sequence[int]):
        super().__init__(xs)
        if len(self.vars) != len(self.scope):
            raise ValueError("alldifferent over a repeated variable is unsatisfiable by construction")

    def satisfied(self, values: Sequence[int]) -> bool:
        return len(set(values)) == len(values)


class AlldiffNaive(_Alldiff):
    """Removes the values of fixed variables from all others, one pass.

    ``offsets`` turns it into alldifferent over ``x_i + offsets[i]``.
    """

    name = "alldiff_naive"
    priority = Priority.LINEAR_HIGH

    def __init__(self, xs: Sequence[int], offsets: Sequence[int] | None = None):
        super().__init__(xs)
        self.offsets = tuple(offsets) if offsets is not None else (0,) * len(self.scope)
        if len(self.offsets) != len(self.scope):
            raise ValueError("offsets length mismatch")

    def satisfied(self, values: Sequence[int]) -> bool:
        shifted = [v + o for v, o in zip(values, self.offsets)]
        return len(set(shifted)) == len(shifted)

    def propagate(self, d: Domain) -> PropStatus:
        sets = d.sets
        used: set[int] = set()
        unfixed = []
        for x, o in zip(self.scope, self.offsets):
            s = sets[x]
            if s.size == 1:
                w = s.min + o
                if w in used:
                    d.restrict(x, 1, 0)
                    return FAILED
                used.add(w)
            else:
                unfixed.append((x, o))
        if not unfixed:
            return SUBSUMED
        if not used:
            return AT_FIXPOINT
        newly_fixed = False
        for x, o in unfixed:
            s = sets[x]
            for w in used:
                v = w - o
                if s.min <= v <= s.max and v in s:
                    s = s.remove(v)
                    if not s.size:
                        break
            if s.size != sets[x].size:
                if not d._set(x, s):
                    return FAILED
                if s.size == 1:
                    newly_fixed = True
        return UNKNOWN if newly_fixed else AT_FIXPOINT

    def subscriptions(self) -> dict[int, int]:
        return {x: FIX for x in self.vars}


def _pathset(t, start, end, to):
    k = l = start
    while l != end:
        l = t[k]
        t[k] = to
        k = l


def _pathmin(t, i):
    while t[i] < i:
        i = t[i]
    return i


def _pathmax(t, i):
    while t[i] > i:
        i = t[i]
    return i


def _hall_pass(lo: list[int], hi: list[int]) -> bool | None:
    """One lower and one upper filtering pass over intervals [lo_i, hi_i].

    Updates ``lo``/``hi`` in place; returns None on failure, else whether
    anything changed. Union-find style path compression over the sorted
    bound values gives O(n log n) per pass.
    """
    n = len(lo)
    minsorted = sorted(range(n), key=lambda i: lo[i])
    maxsorted = sorted(range(n), key=lambda i: hi[i])
    minrank = [0] * n
    maxrank = [0] * n
    bounds = [0] * (2 * n + 2)
    mn = lo[minsorted[0]]
    mx = hi[maxsorted[0]] + 1
    last = mn - 2
    nb = 0
    bounds[0] = last
    i = j = 0
    while True:
        if i < n and mn <= mx:
            if mn != last:
                nb += 1
                bounds[nb] = last = mn
            minrank[minsorted[i]] = nb
            i += 1
            if i < n:
                mn = lo[minsorted[i]]
        else:
            if mx != last:
                nb += 1
                bounds[nb] = last = mx
            maxrank[maxsorted[j]] = nb
            j += 1
            if j == n:
                break
            mx = hi[maxsorted[j]] + 1
    bounds[nb + 1] = bounds[nb] + 2
    changed = False

    t = [0] * (nb + 2)
    dd = [0] * (nb + 2)
    h = [0] * (nb + 2)
    for i in range(1, nb + 2):
        t[i] = h[i] = i - 1
        dd[i] = bounds[i] - bounds[i - 1]
    for v in maxsorted:
        x, y = minrank[v], maxrank[v]
        z = _pathmax(t, x + 1)
        j = t[z]
        dd[z] -= 1
        if dd[z] == 0:
            t[z] = z + 1
            z = _pathmax(t, t[z])
            t[z] = j
        _pathset(t, x + 1, z, z)
        if dd[z] < bounds[z] - bounds[y]:
            return None
        if h[x] > x:
            w = _pathmax(h, h[x])
            lo[v] = bounds[w]
            _pathset(h, x, w, w)
            changed = True
        if dd[z] == bounds[z] - bounds[y]:
            _pathset(h, h[y], j - 1, y)
            h[y] = j - 1

    t = [0] * (nb + 2)
    dd = [0] * (nb + 2)
    h = [0] * (nb + 2)
    for i in range(0, nb + 1):
        t[i] = h[i] = i + 1
        dd[i] = bounds[i + 1] - bounds[i]
    for v in reversed(minsorted):
        x, y = maxrank[v], minrank[v]
        z = _pathmin(t, x - 1)
        j = t[z]
        dd[z] -= 1
        if dd[z] == 0:
            t[z] = z - 1
            z = _pathmin(t, t[z])
            t[z] = j
        _pathset(t, x - 1, z, z)
        if dd[z] < bounds[y] - bounds[z]:
            return None
        if h[x] < x:
            w = _pathmin(h, h[x])
            hi[v] = bounds[w] - 1
            _pathset(h, x, w, w)
            changed = True
        if dd[z] == bounds[y] - bounds[z]:
            _pathset(h, h[y], j + 1, y)
            h[y] = j + 1
    for v in range(n):
        if lo[v] > hi[v]:
            return None
    return changed


def hall_bounds(lo: Sequence[int], hi: Sequence[int]) -> tuple[list[int], list[int]] | None:
    """Greatest bounds(Z)-consistent box for alldifferent inside the given intervals."""
    lo, hi = list(lo), list(hi)
    if not lo:
        return lo, hi
    while True:
        r = _hall_pass(lo, hi)
        if r is None:
            return None
        if not r:
            return lo, hi


class AlldiffBounds(_Alldiff):
    """bounds(Z) alldifferent. Pruning is computed on the range relaxation,
    so a new bound that falls into a domain hole leaves it short of fixpoint."""

    name = "alldiff_bounds"
    priority = Priority.LINEAR_HIGH

    def propagate(self, d: Domain) -> PropStatus:
        sets = d.sets
        xs = self.scope
        res = hall_bounds([sets[x].min for x in xs], [sets[x].max for x in xs])
        if res is None:
            d.restrict(xs[0], 1, 0)
            return FAILED
        lo, hi = res
        exact = True
        for x, a, b in zip(xs, lo, hi):
            s = sets[x]
            if a <= s.min and b >= s.max:
                continue
            if not d.restrict(x, a, b):
                return FAILED
            s = sets[x]
            if s.min != a or s.max != b:
                exact = False
        if all(sets[x].size == 1 for x in xs):
            if len({sets[x].min for x in xs}) != len(xs):
                d.restrict(xs[0], 1, 0)
                return FAILED
            return SUBSUMED
        return AT_FIXPOINT if exact else UNKNOWN

    def subscriptions(self) -> dict[int, int]:
        return {x: BC for x in self.vars}


def regin_supports(doms: Sequence[IntSet]) -> list[set[int]] | None:
    """Values of each variable that belong to some maximum matching covering
    all variables, or None if no such matching exists."""
    n = len(doms)
    vals = [list(s) for s in doms]
    match_var: list[int | None] = [None] * n
    match_val: dict[int, int] = {}

    # greedy start, then augmenting paths (iterative DFS)
    for i in range(n):
        for v in vals[i]:
            if v not in match_val:
                match_val[v] = i
                match_var[i] = v
                break
    for i in range(n):
        if match_var[i] is not None:
            continue
        visited: set[int] = set()
        parent: dict[int, tuple[int, int | None]] = {}
        stack = [(i, iter(vals[i]))]
        seen_vars = {i}
        found = None
        while stack and found is None:
            u, it = stack[-1]
            advanced = False
            for v in it:
                if v in visited:
                    continue
                visited.add(v)
                w = match_val.get(v)
                if w is None:
                    found = (u, v)
                    break
                if w not in seen_vars:
                    seen_vars.add(w)
                    parent[w] = (u, v)
                    stack.append((w, iter(vals[w])))
                    advanced = True
                    break
            if found is None and not advanced:
                stack.pop()
        if found is None:
            return None
        u, v = found
        while True:
            prev = match_var[u]
            match_var[u] = v
            match_val[v] = u
            if u == i:
                break
            pu, pv = parent[u]
            assert pv == prev
            u, v = pu, prev

    # residual graph: var i -> its matched value; value v -> vars containing v unmatched
    val_ids = {}
    for s in vals:
        for v in s:
            if v not in val_ids:
                val_ids[v] = n + len(val_ids)
    total = n + len(val_ids)
    adj: list[list[int]] = [[] for _ in range(total)]
    for i in range(n):
        mv = match_var[i]
        adj[i].append(val_ids[mv])
        for v in vals[i]:
            if v != mv:
                adj[val_ids[v]].append(i)

    # values reachable from a free value
    reach = [False] * total
    stack = [val_ids[v] for v in val_ids if v not in match_val]
    for u in stack:
        reach[u] = True
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if not reach[w]:
                reach[w] = True
                stack.append(w)

    comp = _tarjan(adj)
    out: list[set[int]] = []
    for i in range(n):
        keep = {match_var[i]}
        ci = comp[i]
        for v in vals[i]:
            vid = val_ids[v]
            if comp[vid] == ci or reach[vid]:
                keep.add(v)
        out.append(keep)
    return out


def _tarjan(adj: list[list[int]]) -> list[int]:
    n = len(adj)
    index = [-1] * n
    low = [0] * n
    comp = [-1] * n
    on_stack = [False] * n
    stack: list[int] = []
    counter = 0
    ncomp = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            u, pos = work[-1]
            if pos < len(adj[u]):
                work[-1] = (u, pos + 1)
                w = adj[u][pos]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[u] = min(low[u], index[w])
            else:
                work.pop()
                if work:
                    p = work[-1][0]
                    low[p] = min(low[p], low[u])
                if low[u] == index[u]:
                    while True:
                        w = stack.pop()
                        on_stack[w] = False
                        comp[w] = ncomp
                        if w == u:
                            break
                    ncomp += 1
    return comp


class AlldiffDomain(_Alldiff):
    """Domain-consistent alldifferent (matching plus strongly connected components)."""

    name = "alldiff_domain"
    priority = Priority.QUADRATIC_LOW
    idempotent = True

    def propagate(self, d: Domain) -> PropStatus:
        sets = d.sets
        xs = self.scope
        sup = regin_supports([sets[x] for x in xs])
        if sup is None:
            d.restrict(xs[0], 1, 0)
            return FAILED
        for x, keep in zip(xs, sup):
            if len(keep) != sets[x].size and not d.intersect_var(x, IntSet.of(keep)):
                return FAILED
        if all(sets[x].size == 1 for x in xs):
            return SUBSUMED
        return AT_FIXPOINT

    def subscriptions(self) -> dict[int, int]:
        return {x: DMC for x in self.vars}
