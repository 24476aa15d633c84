"""Self-checks shared by ``fdprop check`` and the test suite.

Each check returns plain data so callers can assert on it or print it.
"""

from __future__ import annotations

import itertools
import random
from typing import Callable, Iterable, Sequence

from ..domain import Domain
from ..engine import Engine, EngineConfig, POLICIES, Space
from ..errors import InvariantViolation
from ..events import classify, merge
from ..intset import IntSet
from ..propagators import (
    AlldiffBounds,
    AlldiffDomain,
    LinearBounds,
    Member,
    Propagator,
    PropStatus,
    apply,
    dom_generic,
    zbnd_wrap,
)
from . import oracles
from .models import REGISTRY, build_model
from .sweep import run

# -- golden traces ------------------------------------------------------------


def incremental_trace(policy: str = "input") -> tuple[list[tuple[int, int]], int]:
    """Final bounds and number of applications for the two-equation example."""
    spec = build_model("incremental")
    e = Engine(EngineConfig.policy(policy, priorities="one"))
    space, _ = e.solve_root(spec.model.domain(), spec.model.propagators())
    return [(s.min, s.max) for s in space.domain.sets], e.stats.steps


def nonidempotent_trace() -> list[tuple[list[tuple[int, int]], PropStatus]]:
    """3 x1 = 2 x2 with a simultaneous sweep, applied twice from
    ([0,3],[0,5]) and once from ([0,2],[0,4])."""
    f = LinearBounds((3, -2), (0, 1), 0)
    d1, s1 = apply(f, Domain.from_bounds([(0, 3), (0, 5)]))
    d2, s2 = apply(f, d1)
    d3, s3 = apply(f, Domain.from_bounds([(0, 2), (0, 4)]))
    bounds = lambda d: [(s.min, s.max) for s in d.sets]
    return [(bounds(d1), s1), (bounds(d2), s2), (bounds(d3), s3)]


def repeated_fixpoints_trace(inverse: bool = False) -> tuple[list[IntSet], dict[str, int]]:
    spec = build_model("repeated-fixpoints")
    m = spec.model
    e = Engine(EngineConfig.policy("dfix", priorities="medium", inverse_priorities=inverse))
    space = Space(m.domain())
    e.isolv(space, e.post(space, m.propagators()))
    before = dict(e.stats.per_prop)
    e.isolv(space, spec.trigger)
    counts: dict[str, int] = {}
    for pid, c in e.stats.per_prop.items():
        name = space.props[pid].name
        counts[name] = counts.get(name, 0) + c - before.get(pid, 0)
    return list(space.domain.sets), counts


# -- event law ----------------------------------------------------------------


def _random_subset(rng: random.Random, s: IntSet) -> IntSet:
    vals = list(s)
    keep = [v for v in vals if rng.random() < 0.7]
    if rng.random() < 0.3 and vals:
        lo = rng.choice(vals)
        keep = [v for v in keep if v >= lo]
    return IntSet.of(keep)


def event_law_violations(chains: int = 10_000, seed: int = 0) -> list[tuple]:
    """Chains D ⊒ D' ⊒ D'' on one variable: the composite change must raise
    exactly the union of the events of the two steps."""
    rng = random.Random(seed)
    bad = []
    for _ in range(chains):
        lo = rng.randint(-5, 5)
        s0 = IntSet.of(v for v in range(lo, lo + rng.randint(1, 10)) if rng.random() < 0.8 or v == lo)
        s1 = _random_subset(rng, s0)
        s2 = _random_subset(rng, s1)
        if not s2.size:
            # wipe-outs end the chain; the law is about proper domains
            continue
        e01 = _events(s0, s1)
        e12 = _events(s1, s2)
        e02 = _events(s0, s2)
        if merge(e01, e12) != e02:
            bad.append((s0, s1, s2))
    return bad


def _events(a: IntSet, b: IntSet) -> dict[int, int]:
    d = Domain([a])
    return classify(d.tighten(0, b))


# -- oracle equivalence -------------------------------------------------------


def small_domains(nvars: int, values: Sequence[int]) -> Iterable[Domain]:
    """Every domain over ``nvars`` variables with nonempty subsets of ``values``."""
    subsets = [IntSet.of(c) for k in range(1, len(values) + 1) for c in itertools.combinations(values, k)]
    for combo in itertools.product(subsets, repeat=nvars):
        yield Domain(list(combo))


def _same(a: Domain, sa: PropStatus, b: Domain, sb: PropStatus) -> bool:
    if (sa == PropStatus.FAILED) or (sb == PropStatus.FAILED):
        return (sa == PropStatus.FAILED) == (sb == PropStatus.FAILED)
    return list(a.sets) == list(b.sets)


def alldiff_oracle_mismatches(max_vars: int = 4, values: Sequence[int] = range(4)) -> dict[str, list]:
    distinct = lambda vs: len(set(vs)) == len(vs)
    out: dict[str, list] = {"domain": [], "bounds": []}
    for n in range(1, max_vars + 1):
        xs = list(range(n))
        fd, fb = AlldiffDomain(xs), AlldiffBounds(xs)
        for d in small_domains(n, list(values)):
            a, sa = apply(fd, d)
            b, sb = dom_generic(xs, distinct, d)
            if not _same(a, sa, b, sb):
                out["domain"].append(d)
            a, sa = apply(fb, d)
            b, sb = zbnd_wrap(xs, distinct, d)
            if not _same(a, sa, b, sb):
                out["bounds"].append(d)
    return out


def checking_mismatches(f: Propagator, nvars: int, values: Sequence[int]) -> list[tuple[int, ...]]:
    """Assignments where "f leaves the fixed domain unchanged" disagrees with
    "the assignment satisfies the constraint"."""
    bad = []
    for theta in itertools.product(values, repeat=nvars):
        d = Domain.from_values([[v] for v in theta])
        out, st = apply(f, d)
        unchanged = st != PropStatus.FAILED and not out.failed and list(out.sets) == list(d.sets)
        if unchanged != f.satisfied([theta[x] for x in f.scope]):
            bad.append(theta)
    return bad


# -- audit and confluence -----------------------------------------------------

AUDIT_NODES = 10

AUDIT_SIZES = {
    "queens": 6,
    "queens-a": 6,
    "golomb": 5,
    "all-interval": 6,
    "magic-sequence": 7,
    "magic-square": 3,
    "minsort": 8,
    "partition": 4,
}


def audit_cells() -> list[EngineConfig]:
    return [
        EngineConfig.policy(p, queue=q, priorities=g)
        for p in POLICIES
        for q in ("fifo", "lifo")
        for g in ("one", "small", "medium", "full")
    ]


def audit_model(name: str, n: int | None, configs: Sequence[EngineConfig], node_limit: int | None) -> list[str]:
    """Run with the loop-head audit on; returns descriptions of violations."""
    problems = []
    for cfg in configs:
        try:
            run(build_model(name, n), cfg, audit=True, node_limit=node_limit, check=True)
        except InvariantViolation as exc:
            problems.append(f"{name} {cfg.label()}: {exc}")
    return problems


def expected_vs_oracle() -> list[tuple[str, bool, str]]:
    """Frozen expectations in the registry against independent enumeration."""
    from .models import DONALD_SOLUTION, PICTURE_SMALL, _runs

    rows = [[c == "#" for c in line] for line in PICTURE_SMALL]
    out = [
        ("queens-8 count", oracles.queens_count(8) == build_model("queens", 8).expected["solutions"], "92"),
        ("golomb-7 optimum", oracles.golomb_optimum(7) == build_model("golomb", 7).expected["optimum"], "25"),
        ("magic-sequence-10", oracles.magic_sequences(10) == [build_model("magic-sequence", 10).expected["unique"]], "unique"),
        ("donald", oracles.cryptarithm(["donald", "gerald"], "robert", "dgr") == [DONALD_SOLUTION], "unique"),
        ("grocery", oracles.grocery_solutions() == [build_model("grocery").expected["unique"]], "unique"),
        ("partition-4", oracles.partitions(4) == [build_model("partition", 4).expected["first"]], "unique"),
        ("all-interval-8", oracles.all_interval_count(8) == build_model("all-interval", 8).expected["solutions"], "40"),
        (
            "picture-small",
            oracles.nonogram_count([_runs(r) for r in rows], [_runs(r[j] for r in rows) for j in range(len(rows[0]))], len(rows[0])) == 1,
            "unique",
        ),
    ]
    return out


def registry_results(names: Iterable[str] | None = None) -> list[tuple[str, bool, str]]:
    """Solve each registry model at its default size and compare with the
    frozen expectations."""
    out = []
    for name in names or REGISTRY:
        spec = build_model(name)
        r = run(spec, EngineConfig(), check=True)
        for key, want in spec.expected.items():
            got = {
                "solutions": r.solutions,
                "unique": r.found[0] if len(r.found) == 1 else r.found,
                "first": r.found[0] if r.found else None,
                "optimum": r.objective,
            }[key]
            out.append((f"{name} {key}", got == want, f"got {got}"))
    return out


Check = Callable[[], tuple[bool, str]]
