"""One test per acceptance criterion; a PASS/FAIL line for each is printed
in the terminal summary (see conftest.py)."""

import time

import pytest

from conftest import ACCEPTANCE
from fdprop.bench import oracles
from fdprop.bench.checks import (
    AUDIT_NODES,
    AUDIT_SIZES,
    alldiff_oracle_mismatches,
    audit_cells,
    audit_model,
    checking_mismatches,
    event_law_violations,
    incremental_trace,
    nonidempotent_trace,
    repeated_fixpoints_trace,
)
from fdprop.bench.models import DONALD_SOLUTION, REGISTRY, build_model
from fdprop.bench.sweep import grid, run
from fdprop.domain import Domain
from fdprop.engine import EngineConfig
from fdprop.events import classify, describe, merge
from fdprop.intset import IntSet
from fdprop.propagators import DFA, BoolSum, Exactly, Lex, LinearBounds, MinProp, PropStatus, Regular


def record(k, ok, msg):
    ACCEPTANCE[k] = (bool(ok), msg)
    assert ok, msg


def test_c01_incremental_golden_trace():
    bounds, steps = incremental_trace("input")
    ok = bounds == [(0, 12), (0, 6), (0, 4)] and steps == 6
    record(1, ok, f"final {bounds} in {steps} applications (want [(0,12),(0,6),(0,4)] in 6)")


def test_c02_nonidempotent_golden_trace():
    got = nonidempotent_trace()
    want = [
        ([(0, 3), (0, 4)], PropStatus.UNKNOWN),
        ([(0, 2), (0, 4)], PropStatus.UNKNOWN),
        ([(0, 2), (0, 3)], PropStatus.AT_FIXPOINT),
    ]
    first_two = [g[0] for g in got[:2]] == [w[0] for w in want[:2]] and got[0][1] == PropStatus.UNKNOWN
    ok = first_two and got[2] == want[2]
    record(2, ok, f"{[(b, s.name) for b, s in got]}")


def test_c03_repeated_fixpoints_golden_trace():
    sets, counts = repeated_fixpoints_trace()
    want = [IntSet.of([6]), IntSet.of([3]), IntSet.of([2]), IntSet.of([0, 1]), IntSet.of([0, 1])]
    _, inv = repeated_fixpoints_trace(inverse=True)
    fm, fn = counts.get("guarded_leq"), counts.get("alldiff_domain")
    ifm, ifn = inv.get("guarded_leq"), inv.get("alldiff_domain")
    ok = sets == want and fm == 3 and fn == 2 and ifm >= 10 and ifn >= 10
    record(3, ok, f"f_M {fm}x, f_N {fn}x; inverted {ifm}x/{ifn}x")


def test_c04_loop_head_audit():
    t0 = time.perf_counter()
    cells = audit_cells()
    assert len(cells) == 48
    problems = []
    for name in REGISTRY:
        problems += audit_model(name, AUDIT_SIZES.get(name), cells, AUDIT_NODES)
    dt = time.perf_counter() - t0
    record(4, not problems and dt < 60, f"{len(problems)} violations over {len(REGISTRY)} models x 48 cells, {dt:.1f}s")


CONFLUENCE_NODES = 100


def _outcome(r):
    return r.failures, r.solutions, tuple(map(str, r.found))


def test_c05_config_confluence():
    cells = grid(
        policy=("input", "sfix", "dfix", "events", "mevents", "devents"),
        queue=("fifo", "lifo"),
        priorities=("one", "small", "medium", "full"),
    )
    cells += [
        EngineConfig(inverse_priorities=True),
        EngineConfig(complete_fixpoints=True),
        EngineConfig(dynamic_priorities=True),
        EngineConfig(queue=("fifo", "lifo") * 7),
    ]
    bad = []
    for name in REGISTRY:
        n = AUDIT_SIZES.get(name)
        seen = {_outcome(run(build_model(name, n), c, node_limit=CONFLUENCE_NODES)) for c in cells}
        if build_model(name, n).model.has_combos():
            for mode in ("single", "immediate", "multiple", "staged"):
                seen.add(_outcome(run(build_model(name, n), EngineConfig(combination=mode), node_limit=CONFLUENCE_NODES)))
        if len(seen) != 1:
            bad.append(name)
    record(5, not bad, f"{len(cells)} cells; disagreeing models: {bad or 'none'}")


def test_c06_oracle_equivalence():
    t0 = time.perf_counter()
    mism = alldiff_oracle_mismatches(4, range(4))
    dfa = DFA.build(0, {3}, [(0, 1, 1), (1, 1, 2), (0, 0, 4), (4, 0, 2), (2, 0, 3), (3, 1, 3)])
    sweeps = {
        "min": (MinProp(0, 1, 2), 3),
        "exactly": (Exactly((0, 1, 2), 3, 2), 4),
        "regular": (Regular((0, 1, 2, 3), dfa), 4),
        "regular-aliased": (Regular((0, 1, 0, 2), dfa), 3),
        "lex": (Lex((0, 1), (2, 3)), 4),
        "bool_sum<=": (BoolSum((0, 1, 2, 3), "<=", 2), 4),
        "bool_sum=": (BoolSum((0, 1, 2, 3), "=", 2), 4),
        "linear": (LinearBounds((2, -1, 3), (0, 1, 2), 4), 3),
        "linear4": (LinearBounds((1, 1, -1, -2), (0, 1, 2, 3), 1), 4),
    }
    bad = {k: len(v) for k, v in mism.items() if v}
    for key, (f, nvars) in sweeps.items():
        vals = range(2) if key.startswith("bool") or key.startswith("regular") else range(5)
        m = checking_mismatches(f, nvars, vals)
        if m:
            bad[key] = len(m)
    dt = time.perf_counter() - t0
    record(6, not bad and dt < 120, f"mismatches {bad or 'none'}, {dt:.1f}s")


def test_c07_event_law():
    viol = event_law_violations(10_000, seed=0)
    d = Domain.from_values([[1, 2, 3], [3, 4, 5, 6], [0, 1]])
    ev = {}
    for x, s in enumerate([IntSet.of([1, 2]), IntSet.of([3, 5, 6]), IntSet.of([1])]):
        ev = merge(ev, classify(d.tighten(x, s)))
    got = describe(ev, ["x1", "x2", "x3"])
    want = {"ubc(x1)", "dmc(x1)", "dmc(x2)", "fix(x3)", "lbc(x3)", "dmc(x3)"}
    record(7, not viol and got == want, f"{len(viol)} violations in 10^4 chains; example {sorted(got)}")


def _timed(name, n=None):
    t0 = time.perf_counter()
    r = run(build_model(name, n), EngineConfig(), check=True)
    return r, time.perf_counter() - t0


def test_c08_search_results():
    q, tq = _timed("queens", 8)
    ms, tm = _timed("magic-sequence", 10)
    g, tg = _timed("golomb", 7)
    dons = {v: _timed(f"donald-{v}") for v in "bdv"}
    donald = oracles.cryptarithm(["donald", "gerald"], "robert", "dgr")
    letters = sorted(DONALD_SOLUTION)
    msgs = []
    ok = q.solutions == 92 == oracles.queens_count(8)
    msgs.append(f"queens-8 {q.solutions}")
    ok &= ms.found == [(6, 2, 1, 0, 0, 0, 1, 0, 0, 0)] == oracles.magic_sequences(10)
    msgs.append(f"magic-sequence-10 {ms.found}")
    ok &= g.objective == 25 == oracles.golomb_optimum(7)
    msgs.append(f"golomb-7 {g.objective}")
    for v, (r, _) in dons.items():
        spec = build_model(f"donald-{v}")
        names = [spec.model.names[x] for x in (spec.model.outputs or range(len(spec.model.names)))]
        sols = [dict(zip(names, s)) for s in r.found]
        ok &= r.solutions == 1 and len(donald) == 1 and {k: sols[0][k] for k in letters} == donald[0]
    msgs.append(f"donald {[dons[v][0].solutions for v in 'bdv']} solutions")
    times = [tq, tm, tg] + [t for _, t in dons.values()]
    ok &= max(times) < 30
    record(8, ok, "; ".join(msgs))


DIRECTION_NODES = 300


def _steps(name, **kw):
    return run(build_model(name), EngineConfig(priorities="full", **kw), node_limit=DIRECTION_NODES).steps


def test_c09_directional_step_counts():
    bad = []
    for name in REGISTRY:
        none, static, dyn = (_steps(name, fixpoint=f) for f in ("none", "static", "dynamic"))
        if not (none >= static >= dyn):
            bad.append(f"{name} none={none} static={static} dynamic={dyn}")
    qn, qf = _steps("queens", events="none"), _steps("queens", events="fix")
    if not qf <= qn:
        bad.append(f"queens events none={qn} fix={qf}")
    for name in REGISTRY:
        if build_model(name).model.has_combos():
            st, mu = _steps(name, combination="staged"), _steps(name, combination="multiple")
            if not st <= mu:
                bad.append(f"{name} staged={st} multiple={mu}")
    record(9, not bad, "; ".join(bad) or "all directions hold")


def _enqueues(name, n, dyn):
    cfg = EngineConfig(events="fix_bc_dmc", dyn_events=dyn)
    r = run(build_model(name, n), cfg)
    return r.enqueues, (r.failures, r.solutions, tuple(r.found))


@pytest.mark.parametrize("name,n", [("min-chain", 4), ("exactly", 3)])
def test_c10_dynamic_event_sets(name, n):
    s, o1 = _enqueues(name, n, "static")
    m, o2 = _enqueues(name, n, "monotonic")
    f, o3 = _enqueues(name, n, "full")
    ok = m < s and f < s and o1 == o2 == o3
    prev = ACCEPTANCE.get(10, (True, ""))
    msg = f"{name}: enqueues static {s}, monotonic {m}, full {f}"
    ACCEPTANCE[10] = (prev[0] and ok, (prev[1] + "; " if prev[1] else "") + msg)
    assert ok, msg
