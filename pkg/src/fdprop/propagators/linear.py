"""Linear equations sum(a_i * x_i) = k: bounds(R) and domain-consistent propagators."""

from __future__ import annotations

from typing import Sequence

from ..domain import Domain
from ..errors import EnumerationCapExceeded
from ..events import BC, DMC
from ..intset import IntSet
from .base import Priority, Propagator, PropStatus
from .generic import DEFAULT_CAP

__all__ = ["LinearBounds", "LinearDomain", "Plus", "normalize_terms", "arity_priority"]

FAILED = PropStatus.FAILED
SUBSUMED = PropStatus.SUBSUMED
AT_FIXPOINT = PropStatus.AT_FIXPOINT
UNKNOWN = PropStatus.UNKNOWN


def normalize_terms(coeffs: Sequence[int], xs: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Merge repeated variables and drop zero coefficients."""
    if len(coeffs) != len(xs):
        raise ValueError("coefficient and variable lists differ in length")
    acc: dict[int, int] = {}
    for a, x in zip(coeffs, xs):
        acc[x] = acc.get(x, 0) + a
    terms = [(a, x) for x, a in acc.items() if a != 0]
    return tuple(a for a, _ in terms), tuple(x for _, x in terms)


def arity_priority(n: int, low: bool = False) -> int:
    base = {0: 0, 1: 0, 2: 1, 3: 2}.get(n, 3)
    return 2 * base + int(low)


class LinearBounds(Propagator):
    """bounds(R) propagator for a linear equation.

    ``sweep="jacobi"`` computes every new bound from the input domain;
    ``"gauss_seidel"`` updates variables in ``order`` and each computation
    sees the bounds already tightened in this call. Both report
    ``AT_FIXPOINT`` exactly when every tightening bound was computed without
    rounding and did not land in a domain hole.
    """

    name = "linear"

    def __init__(
        self,
        coeffs: Sequence[int],
        xs: Sequence[int],
        k: int,
        sweep: str = "jacobi",
        order: Sequence[int] | None = None,
        priority: int | None = None,
    ):
        if sweep not in ("jacobi", "gauss_seidel"):
            raise ValueError(f"unknown sweep {sweep!r}")
        self.raw = (tuple(coeffs), tuple(xs))
        self.coeffs, xs_n = normalize_terms(coeffs, xs)
        super().__init__(xs_n)
        self.k = k
        self.sweep = sweep
        pos = {x: i for i, x in enumerate(xs_n)}
        self.order = tuple(pos[x] for x in order if x in pos) if order is not None else tuple(range(len(xs_n)))
        self.priority = arity_priority(len(xs_n)) if priority is None else priority

    def __repr__(self) -> str:
        lhs = " + ".join(f"{a}*x{x}" for a, x in zip(self.coeffs, self.scope))
        return f"{lhs} = {self.k}"

    def satisfied(self, values: Sequence[int]) -> bool:
        return sum(a * v for a, v in zip(self.coeffs, values)) == self.k

    def subscriptions(self) -> dict[int, int]:
        return {x: BC for x in self.vars}

    @staticmethod
    def _bound(a: int, k: int, rest_lo: int, rest_hi: int):
        """New (lo, lo_exact, hi, hi_exact) for ``a*x = k - rest``."""
        num_lo, num_hi = k - rest_hi, k - rest_lo
        if a < 0:
            num_lo, num_hi = num_hi, num_lo
        lo = -((-num_lo) // a)
        hi = num_hi // a
        return lo, num_lo % a == 0, hi, num_hi % a == 0

    def propagate(self, d: Domain) -> PropStatus:
        sets = d.sets
        xs, cs, k = self.scope, self.coeffs, self.k
        n = len(xs)
        if n == 0:
            return SUBSUMED if k == 0 else FAILED
        lo_t = []
        hi_t = []
        for a, x in zip(cs, xs):
            s = sets[x]
            if a > 0:
                lo_t.append(a * s.min)
                hi_t.append(a * s.max)
            else:
                lo_t.append(a * s.max)
                hi_t.append(a * s.min)
        smin, smax = sum(lo_t), sum(hi_t)
        if smin > k or smax < k:
            d.restrict(xs[0], 1, 0)
            return FAILED
        fix = True
        changed = False
        jacobi = self.sweep == "jacobi"
        if jacobi:
            plan = [
                (i, self._bound(cs[i], k, smin - lo_t[i], smax - hi_t[i])) for i in self.order
            ]
        else:
            plan = self.order
        for item in plan:
            if jacobi:
                i, (lo, lo_ex, hi, hi_ex) = item
            else:
                i = item
                lo, lo_ex, hi, hi_ex = self._bound(cs[i], k, smin - lo_t[i], smax - hi_t[i])
            x = xs[i]
            s = sets[x]
            tight_lo = lo > s.min
            tight_hi = hi < s.max
            if not (tight_lo or tight_hi):
                continue
            if not d.restrict(x, lo, hi):
                return FAILED
            changed = True
            s = sets[x]
            if tight_lo and (not lo_ex or s.min != lo):
                fix = False
            if tight_hi and (not hi_ex or s.max != hi):
                fix = False
            if not jacobi:
                a = cs[i]
                nl, nh = (a * s.min, a * s.max) if a > 0 else (a * s.max, a * s.min)
                smin += nl - lo_t[i]
                smax += nh - hi_t[i]
                lo_t[i], hi_t[i] = nl, nh
        if all(sets[x].size == 1 for x in xs):
            # a simultaneous sweep can fix every variable from stale bounds
            if sum(a * sets[x].min for a, x in zip(cs, xs)) != k:
                d.restrict(xs[0], 1, 0)
                return FAILED
            return SUBSUMED
        if not changed or fix:
            return AT_FIXPOINT
        return UNKNOWN


class Plus(LinearBounds):
    """x = y + z as a three-variable bounds(R) linear equation."""

    name = "plus"

    def __init__(self, x: int, y: int, z: int, priority: int | None = None):
        super().__init__((1, -1, -1), (x, y, z), 0, priority=priority)
        if priority is None and len(self.vars) == 3:
            self.priority = Priority.TERNARY_HIGH


class LinearDomain(Propagator):
    """Domain-consistent propagator for a linear equation.

    Supports are found by a layered dynamic program over reachable partial
    sums rather than by enumerating the Cartesian product. Terms are
    processed in decreasing order of coefficient magnitude and partial sums
    that cannot reach ``k`` given the remaining bounds are discarded; the
    total number of layer states is bounded by ``cap``.
    """

    name = "linear_dom"
    priority = Priority.VERYSLOW_LOW
    idempotent = True

    def __init__(self, coeffs: Sequence[int], xs: Sequence[int], k: int, cap: int = DEFAULT_CAP):
        self.coeffs, xs_n = normalize_terms(coeffs, xs)
        super().__init__(xs_n)
        self.k = k
        self.cap = cap
        self.layer_order = sorted(range(len(xs_n)), key=lambda i: -abs(self.coeffs[i]))

    def __repr__(self) -> str:
        lhs = " + ".join(f"{a}*x{x}" for a, x in zip(self.coeffs, self.scope))
        return f"{lhs} = {self.k} (dom)"

    def satisfied(self, values: Sequence[int]) -> bool:
        return sum(a * v for a, v in zip(self.coeffs, values)) == self.k

    def subscriptions(self) -> dict[int, int]:
        return {x: DMC for x in self.vars}

    def propagate(self, d: Domain) -> PropStatus:
        sets = d.sets
        k = self.k
        order = self.layer_order
        terms = [(self.coeffs[i], self.scope[i]) for i in order]
        n = len(terms)
        if n == 0:
            return SUBSUMED if k == 0 else FAILED
        # suffix hulls of the remaining terms
        suf_lo = [0] * (n + 1)
        suf_hi = [0] * (n + 1)
        for j in range(n - 1, -1, -1):
            a, x = terms[j]
            s = sets[x]
            p, q = a * s.min, a * s.max
            suf_lo[j] = suf_lo[j + 1] + min(p, q)
            suf_hi[j] = suf_hi[j + 1] + max(p, q)
        if not suf_lo[0] <= k <= suf_hi[0]:
            d.restrict(terms[0][1], 1, 0)
            return FAILED
        layers = [{0}]
        budget = self.cap
        for j, (a, x) in enumerate(terms):
            lo, hi = k - suf_hi[j + 1], k - suf_lo[j + 1]
            vals = list(sets[x])
            nxt = set()
            for s in layers[-1]:
                for v in vals:
                    t = s + a * v
                    if lo <= t <= hi:
                        nxt.add(t)
            budget -= len(nxt)
            if budget < 0:
                raise EnumerationCapExceeded(f"linear domain propagation exceeded {self.cap} states")
            if not nxt:
                d.restrict(x, 1, 0)
                return FAILED
            layers.append(nxt)
        reach = {k} & layers[n]
        if not reach:
            d.restrict(terms[0][1], 1, 0)
            return FAILED
        keep: list[set[int]] = [set() for _ in range(n)]
        for j in range(n - 1, -1, -1):
            a, x = terms[j]
            vals = list(sets[x])
            prev = set()
            kj = keep[j]
            for s in layers[j]:
                for v in vals:
                    if s + a * v in reach:
                        kj.add(v)
                        prev.add(s)
            reach = prev
        for j, (a, x) in enumerate(terms):
            if len(keep[j]) != sets[x].size and not d.intersect_var(x, IntSet.of(keep[j])):
                return FAILED
        if all(sets[x].size == 1 for _, x in terms):
            return SUBSUMED
        return AT_FIXPOINT
