"""Incremental propagation engine with pluggable scheduling policies.

One call to :meth:`Engine.isolv` takes a solver state whose domain is a
fixpoint of the propagators already in it, adds new propagators, and runs
the queue until every propagator is at fixpoint or the domain fails.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Sequence

from .domain import Domain
from .errors import ConfigError, InvariantViolation
from .events import ALL, DMC, EVENT_LEVELS, DependencyTable, widen
from .propagators.base import Propagator, PropStatus, apply
from .propagators.staged import STAGE_A, STAGE_B

__all__ = [
    "EngineConfig",
    "POLICIES",
    "GRANULARITIES",
    "PropQueue",
    "Stats",
    "Space",
    "Engine",
    "level_map",
    "debug_audit",
]

FIXPOINT_MODES = ("none", "static", "dynamic")
DYN_EVENTS = ("static", "monotonic", "full")
GRANULARITIES = {"one": 1, "small": 3, "medium": 7, "full": 14}
COMBINATIONS = ("single", "immediate", "multiple", "staged")

# the six wake-up policies, from plain input dependence to fully dynamic event sets
POLICIES = {
    "input": dict(fixpoint="none", events="none", dyn_events="static"),
    "sfix": dict(fixpoint="static", events="none", dyn_events="static"),
    "dfix": dict(fixpoint="dynamic", events="none", dyn_events="static"),
    "events": dict(fixpoint="dynamic", events="fix_bc_dmc", dyn_events="static"),
    "mevents": dict(fixpoint="dynamic", events="fix_bc_dmc", dyn_events="monotonic"),
    "devents": dict(fixpoint="dynamic", events="fix_bc_dmc", dyn_events="full"),
}

_SMALL = (0, 0, 0, 1, 1, 2, 2)


def level_map(priority: int, granularity: str) -> int:
    """Queue level of a 14-level priority under a granularity."""
    if granularity == "full":
        return priority
    if granularity == "medium":
        return priority // 2
    if granularity == "small":
        return _SMALL[priority // 2]
    if granularity == "one":
        return 0
    raise ConfigError(f"unknown priority granularity {granularity!r}")


@dataclass(frozen=True)
class EngineConfig:
    fixpoint: str = "dynamic"
    events: str = "fix_bc_dmc"
    dyn_events: str = "static"
    queue: str | tuple[str, ...] = "fifo"
    priorities: str = "full"
    inverse_priorities: bool = False
    complete_fixpoints: bool = False
    dynamic_priorities: bool = False
    combination: str = "single"

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if self.fixpoint not in FIXPOINT_MODES:
            raise ConfigError(f"fixpoint must be one of {FIXPOINT_MODES}")
        if self.events not in EVENT_LEVELS:
            raise ConfigError(f"events must be one of {EVENT_LEVELS}")
        if self.dyn_events not in DYN_EVENTS:
            raise ConfigError(f"dyn_events must be one of {DYN_EVENTS}")
        if self.priorities not in GRANULARITIES:
            raise ConfigError(f"priorities must be one of {tuple(GRANULARITIES)}")
        if self.combination not in COMBINATIONS:
            raise ConfigError(f"combination must be one of {COMBINATIONS}")
        queues = (self.queue,) if isinstance(self.queue, str) else tuple(self.queue)
        if any(q not in ("fifo", "lifo") for q in queues):
            raise ConfigError("queue policy must be fifo or lifo")
        if not isinstance(self.queue, str) and len(queues) != self.nlevels:
            raise ConfigError(f"per-level queue policy needs {self.nlevels} entries")
        if self.dyn_events != "static" and self.events != "fix_bc_dmc":
            raise ConfigError("dynamic event sets require the fix_bc_dmc event level")
        if self.combination == "staged" and GRANULARITIES[self.priorities] < 7:
            raise ConfigError("staged propagators require medium or full priorities")

    @property
    def nlevels(self) -> int:
        return GRANULARITIES[self.priorities]

    def lifo_levels(self) -> frozenset[int]:
        if isinstance(self.queue, str):
            return frozenset(range(self.nlevels)) if self.queue == "lifo" else frozenset()
        return frozenset(i for i, q in enumerate(self.queue) if q == "lifo")

    @classmethod
    def policy(cls, name: str, **kw) -> EngineConfig:
        """Config for one of the named wake-up policies in :data:`POLICIES`."""
        if name not in POLICIES:
            raise ConfigError(f"unknown policy {name!r}; expected one of {tuple(POLICIES)}")
        return cls(**{**POLICIES[name], **kw})

    def with_(self, **kw) -> EngineConfig:
        return replace(self, **kw)

    def label(self) -> str:
        parts = [f"fixpoint={self.fixpoint}", f"events={self.events}"]
        defaults = EngineConfig()
        for k in ("dyn_events", "queue", "priorities", "inverse_priorities",
                  "complete_fixpoints", "dynamic_priorities", "combination"):
            v = getattr(self, k)
            if v != getattr(defaults, k):
                parts.append(f"{k}={v if not isinstance(v, tuple) else '/'.join(v)}")
        return ",".join(parts)


@dataclass
class Stats:
    steps: int = 0
    enqueues: int = 0
    failures: int = 0
    solutions: int = 0
    nodes: int = 0
    per_level: Counter = field(default_factory=Counter)
    per_prop: Counter = field(default_factory=Counter)

    def snapshot(self) -> dict:
        return {
            "steps": self.steps,
            "enqueues": self.enqueues,
            "failures": self.failures,
            "solutions": self.solutions,
            "nodes": self.nodes,
        }


class PropQueue:
    """Per-level FIFO/LIFO queues with membership dedup.

    Re-leveling a queued propagator leaves a stale entry behind that is
    skipped on pop (each live entry carries the propagator's current token).
    """

    def __init__(
        self,
        nlevels: int,
        lifo: Iterable[int] = (),
        inverse: bool = False,
        complete: bool = False,
    ):
        self.levels: list[deque] = [deque() for _ in range(nlevels)]
        self.lifo = frozenset(lifo)
        self.inverse = inverse
        self.complete = complete
        self.where: dict[int, tuple[int, int]] = {}
        self.live = [0] * nlevels
        self.current: int | None = None
        self._token = 0

    def __len__(self) -> int:
        return len(self.where)

    def __bool__(self) -> bool:
        return bool(self.where)

    def __contains__(self, pid: int) -> bool:
        return pid in self.where

    def level_of(self, pid: int) -> int | None:
        w = self.where.get(pid)
        return None if w is None else w[0]

    def push(self, pid: int, level: int, move: bool = False) -> bool:
        """Enqueue ``pid`` at ``level``; returns True iff it was not queued before.

        Pushing an already queued propagator is a no-op unless ``move`` is
        set, in which case it is appended at the back of ``level``.
        """
        old = self.where.get(pid)
        if old is not None:
            if not move or old[0] == level:
                return False
            self.live[old[0]] -= 1
        self._token += 1
        self.where[pid] = (level, self._token)
        self.levels[level].append((pid, self._token))
        self.live[level] += 1
        return old is None

    def remove(self, pid: int) -> None:
        old = self.where.pop(pid, None)
        if old is not None:
            self.live[old[0]] -= 1

    def _pick_level(self) -> int:
        if self.complete and self.current is not None and self.live[self.current]:
            return self.current
        rng = range(len(self.levels) - 1, -1, -1) if self.inverse else range(len(self.levels))
        for i in rng:
            if self.live[i]:
                self.current = i
                return i
        raise IndexError("choose from an empty queue")

    def pop(self) -> int:
        level = self._pick_level()
        dq = self.levels[level]
        take = dq.pop if level in self.lifo else dq.popleft
        while True:
            pid, token = take()
            w = self.where.get(pid)
            if w is not None and w[1] == token:
                del self.where[pid]
                self.live[level] -= 1
                return pid

    def snapshot(self) -> list[list[int]]:
        """Live contents per level, in pop order."""
        out = []
        for i, dq in enumerate(self.levels):
            items = [p for p, t in dq if self.where.get(p, (None, None))[1] == t]
            out.append(items[::-1] if i in self.lifo else items)
        return out


class Space:
    """Copyable solver state: domain, propagators, subscriptions and stages."""

    __slots__ = ("domain", "props", "alive", "deps", "stages")

    def __init__(self, domain: Domain):
        self.domain = domain
        self.props: list[Propagator] = []
        self.alive: list[bool] = []
        self.deps = DependencyTable(len(domain))
        self.stages: dict[int, str] = {}

    def copy(self) -> Space:
        s = Space.__new__(Space)
        s.domain = self.domain.copy()
        s.props = self.props.copy()
        s.alive = self.alive.copy()
        s.deps = self.deps.copy()
        s.stages = self.stages.copy()
        return s

    @property
    def failed(self) -> bool:
        return self.domain.failed

    def live_props(self) -> list[int]:
        return [i for i, a in enumerate(self.alive) if a]


TraceHook = Callable[[dict], None]


def debug_audit(space: Space, queued: Iterable[int] = ()) -> list[int]:
    """Propagators outside ``queued`` that are not at fixpoint on the domain.

    Disposed (subsumed) propagators are included: subsumption promises they
    can never prune again.
    """
    d = space.domain
    if d.failed:
        return []
    skip = set(queued)
    bad = []
    for pid, f in enumerate(space.props):
        if pid in skip:
            continue
        out, _ = apply(f, d)
        if out != d:
            bad.append(pid)
    return bad


class Engine:
    """Runs propagation for a fixed configuration and accumulates statistics."""

    def __init__(self, config: EngineConfig | None = None, audit: bool = False, trace: TraceHook | None = None):
        self.config = config or EngineConfig()
        self.audit = audit
        self.trace = trace
        self.stats = Stats()
        cfg = self.config
        self._fix = cfg.fixpoint
        self._level = cfg.events
        self._dyn = cfg.dyn_events
        self._gran = cfg.priorities
        self._dynprio = cfg.dynamic_priorities
        self._lifo = cfg.lifo_levels()

    # -- setup --------------------------------------------------------------

    def subscription_for(self, f: Propagator) -> dict[int, int]:
        if self._level == "none":
            return {x: DMC for x in f.vars}
        return {x: w for x, m in f.subscriptions().items() if (w := widen(m, self._level))}

    def post(self, space: Space, props: Iterable[Propagator]) -> list[int]:
        """Register propagators in ``space`` without running them."""
        pids = []
        for f in props:
            pid = len(space.props)
            space.props.append(f)
            space.alive.append(True)
            space.deps.subscribe(pid, self.subscription_for(f))
            pids.append(pid)
        return pids

    # -- priorities -----------------------------------------------------------

    def reprioritize(self, f: Propagator, base: int, d: Domain) -> int:
        """Priority after dynamic adjustment by the number of unfixed variables."""
        if not self._dynprio:
            return base
        u = f.unfixed(d)
        if u <= 2:
            return min(base, 2 + (base & 1))
        if u == 3:
            return min(base, 4 + (base & 1))
        return base

    def _level_of(self, f: Propagator, stage: str | None, d: Domain) -> int:
        base = f.stage_priority(stage) if stage is not None else f.priority
        return level_map(self.reprioritize(f, base, d), self._gran)

    # -- main loop ----------------------------------------------------------

    def new_queue(self) -> PropQueue:
        cfg = self.config
        return PropQueue(cfg.nlevels, self._lifo, cfg.inverse_priorities, cfg.complete_fixpoints)

    def _enqueue(self, space: Space, q: PropQueue, pid: int, mask: int, want: str | None = None) -> None:
        f = space.props[pid]
        stage = None
        move = False
        if f.staged:
            if want is None:
                want = f.stage_for(mask)
            cur = space.stages.get(pid) if pid in q else None
            # stage A dominates: a queued stage-B propagator is promoted, never demoted
            stage = STAGE_A if STAGE_A in (want, cur) else STAGE_B
            space.stages[pid] = stage
            move = cur is not None and cur != stage
        if q.push(pid, self._level_of(f, stage, space.domain), move):
            self.stats.enqueues += 1

    def isolv(self, space: Space, new: Sequence[int] | Iterable[Propagator] = ()) -> bool:
        """Propagate ``space`` to the mutual fixpoint; returns False on failure.

        ``new`` holds ids already posted, or propagator objects to post now.
        """
        new = list(new)
        if new and isinstance(new[0], Propagator):
            new = self.post(space, new)
        d = space.domain
        if d.failed:
            return False
        q = self.new_queue()
        for pid in new:
            if space.alive[pid]:
                self._enqueue(space, q, pid, ALL)
        stats = self.stats
        props = space.props
        while q:
            if self.audit:
                bad = debug_audit(space, q.where)
                if bad:
                    raise InvariantViolation([props[p] for p in bad])
            pid = q.pop()
            level = q.current
            if not space.alive[pid]:
                continue
            f = props[pid]
            stats.steps += 1
            stats.per_level[level] += 1
            stats.per_prop[pid] += 1
            nxt = None
            stage = None
            if f.staged:
                stage = space.stages.pop(pid, STAGE_A)
                status, nxt = f.run_stage(stage, d)
            else:
                status = f.propagate(d)
            if d.failed:
                status = PropStatus.FAILED
            batch = d.drain()
            if self.trace is not None:
                self.trace({
                    "step": stats.steps,
                    "pid": pid,
                    "prop": f,
                    "stage": stage,
                    "level": level,
                    "status": status,
                    "events": batch,
                    "queue": q.snapshot(),
                    "domain": d,
                })
            if status == PropStatus.FAILED:
                return False
            self.new_policy(space, q, pid, status, batch, nxt)
        return True

    def new_policy(
        self,
        space: Space,
        q: PropQueue,
        pid: int,
        status: PropStatus,
        batch: dict[int, int],
        next_stage: str | None = None,
    ) -> None:
        """Schedule the propagators that may have left their fixpoint after ``pid`` ran."""
        f = space.props[pid]
        deps = space.deps
        wake = deps.dependents(batch) if batch else {}
        if status == PropStatus.SUBSUMED:
            deps.unsubscribe(pid)
            space.alive[pid] = False
            space.stages.pop(pid, None)
            wake.pop(pid, None)
        else:
            at_fix = (self._fix == "static" and f.idempotent) or (
                self._fix == "dynamic" and (f.idempotent or status == PropStatus.AT_FIXPOINT)
            )
            if at_fix:
                wake.pop(pid, None)
            if self._dyn != "static":
                es = f.monotonic_events(space.domain) if self._dyn == "monotonic" else f.dynamic_events(space.domain)
                if es is not None:
                    deps.resubscribe(pid, {x: w for x, m in es.items() if (w := widen(m, self._level))})
                if not at_fix:
                    # a propagator not known to be at fixpoint that changed its
                    # own variables must stay scheduled whatever it now watches
                    own = 0
                    for x in f.vars:
                        own |= batch.get(x, 0)
                    if own:
                        wake[pid] = wake.get(pid, 0) | own
            if next_stage is not None:
                self._enqueue(space, q, pid, 0, want=next_stage)
        for p, mask in wake.items():
            if space.alive[p]:
                self._enqueue(space, q, p, mask)

    # -- convenience --------------------------------------------------------

    def solve_root(self, domain: Domain, props: Iterable[Propagator]) -> tuple[Space, bool]:
        """Fresh space with ``props`` posted and propagated from ``domain``."""
        space = Space(domain.copy())
        pids = self.post(space, props)
        ok = self.isolv(space, pids)
        return space, ok
