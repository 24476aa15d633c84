import pytest

from fdprop.bench.models import build_model
from fdprop.bench.sweep import run
from fdprop.domain import Domain
from fdprop.engine import Engine, EngineConfig, POLICIES, PropQueue, Space, debug_audit, level_map
from fdprop.errors import ConfigError, InvariantViolation
from fdprop.events import DMC, FIX, LBC
from fdprop.propagators import (
    DFA, AlldiffDomain, LeqOffset, LinearBounds, Priority, PropStatus, Regular, StagedAlldiff, StagedLinear,
)
from fdprop.propagators.staged import STAGE_A, STAGE_B


# -- queue ---------------------------------------------------------------------


def _queue(**kw):
    q = PropQueue(14, **kw)
    q.push(10, 1)
    q.push(11, 1)
    q.push(12, 4)
    return q


def test_queue_order():
    assert _queue().pop() == 10
    assert _queue(inverse=True).pop() == 12
    assert _queue(lifo={1}).pop() == 11


def test_queue_dedup_and_move():
    q = _queue()
    assert not q.push(10, 1) and len(q) == 3
    assert not q.push(12, 0, move=True)
    assert q.level_of(12) == 0 and len(q) == 3
    assert [q.pop() for _ in range(3)] == [12, 10, 11]
    with pytest.raises(IndexError):
        q.pop()


def test_level_maps():
    assert [level_map(p, "full") for p in range(14)] == list(range(14))
    assert [level_map(p, "medium") for p in range(14)] == [p // 2 for p in range(14)]
    assert [level_map(p, "small") for p in range(14)] == [0] * 6 + [1] * 4 + [2] * 4
    assert {level_map(p, "one") for p in range(14)} == {0}


# -- configuration -------------------------------------------------------------


@pytest.mark.parametrize(
    "kw",
    [
        dict(fixpoint="sometimes"),
        dict(events="all"),
        dict(dyn_events="monotonic", events="fix_bc"),
        dict(combination="staged", priorities="small"),
        dict(queue=("fifo", "lifo")),
        dict(queue="stack"),
    ],
)
def test_invalid_configs(kw):
    with pytest.raises(ConfigError):
        EngineConfig(**kw)


def test_policies():
    assert set(POLICIES) == {"input", "sfix", "dfix", "events", "mevents", "devents"}
    with pytest.raises(ConfigError):
        EngineConfig.policy("nope")
    assert EngineConfig.policy("devents").dyn_events == "full"


# -- isolv ---------------------------------------------------------------------


def test_empty_new_set_is_noop():
    e = Engine()
    space, ok = e.solve_root(Domain.from_bounds([(0, 5), (0, 5)]), [LeqOffset(0, 1, -1)])
    steps = e.stats.steps
    before = space.domain.copy()
    assert e.isolv(space, []) and e.stats.steps == steps and space.domain == before


def _space(props, bounds):
    e = Engine(EngineConfig.policy("input", priorities="one"))
    sp = Space(Domain.from_bounds(bounds))
    e.post(sp, props)
    return e, sp


def test_new_input_wakes_self():
    e, sp = _space([LeqOffset(0, 1, 1), LeqOffset(1, 2)], [(0, 9)] * 3)
    q = e.new_queue()
    e.new_policy(sp, q, 0, PropStatus.AT_FIXPOINT, {0: DMC, 1: DMC})
    assert set(q.where) == {0, 1}


def test_idempotent_excluded_under_static_fixpoints():
    e = Engine(EngineConfig.policy("sfix"))
    sp = Space(Domain.from_bounds([(0, 3)] * 3))
    e.post(sp, [AlldiffDomain((0, 1, 2)), LeqOffset(0, 1)])
    q = e.new_queue()
    e.new_policy(sp, q, 0, PropStatus.AT_FIXPOINT, {0: DMC | LBC})
    assert set(q.where) == {1}


def test_event_mask_filters_wakeups():
    # x1 <= x2 + 1 only cares about the upper bound of x2
    e = Engine(EngineConfig(events="fix_lbc_ubc"))
    sp = Space(Domain.from_bounds([(0, 9)] * 3))
    e.post(sp, [LeqOffset(0, 1, 1), LeqOffset(2, 2)])
    q = e.new_queue()
    e.new_policy(sp, q, 1, PropStatus.AT_FIXPOINT, {1: LBC | DMC})
    assert 0 not in q


def test_subsumed_is_disposed():
    e = Engine()
    sp = Space(Domain.from_bounds([(0, 3), (5, 9)]))
    e.post(sp, [LeqOffset(0, 1)])
    assert e.isolv(sp, [0])
    assert not sp.alive[0] and sp.deps.subscriptions(0) == {}


# -- staging and priorities ----------------------------------------------------


def test_staged_alldiff_stages():
    e = Engine(EngineConfig(combination="staged"))
    sp = Space(Domain.from_bounds([(0, 3)] * 3))
    e.post(sp, [StagedAlldiff((0, 1, 2))])
    q = e.new_queue()
    e._enqueue(sp, q, 0, FIX | DMC)
    assert sp.stages[0] == STAGE_A and q.level_of(0) == Priority.LINEAR_HIGH
    e._enqueue(sp, q, 0, DMC)
    assert sp.stages[0] == STAGE_A and len(q) == 1
    q = e.new_queue()
    e._enqueue(sp, q, 0, DMC)
    assert sp.stages[0] == STAGE_B and q.level_of(0) == Priority.QUADRATIC_LOW
    e._enqueue(sp, q, 0, FIX | DMC)
    assert sp.stages[0] == STAGE_A and q.level_of(0) == Priority.LINEAR_HIGH and len(q) == 1
    assert q.pop() == 0 and not q


def test_staged_linear_skips_domain_stage_on_ranges():
    f = StagedLinear((1, 1, -1), (0, 1, 2), 0)
    d = Domain.from_bounds([(0, 3), (0, 3), (0, 9)])
    status, nxt = f.run_stage(STAGE_A, d)
    assert nxt is None and d[2].max == 6
    d = Domain.from_values([[0, 2, 3], [0, 3], range(10)])
    status, nxt = f.run_stage(STAGE_A, d)
    assert nxt == STAGE_B


def test_reprioritize():
    e = Engine(EngineConfig(dynamic_priorities=True))
    f = LinearBounds((1,) * 5, range(5), 4)
    d = Domain.from_bounds([(0, 0), (1, 1), (0, 0), (0, 9), (0, 9)])
    assert e.reprioritize(f, f.priority, d) in (Priority.BINARY_HIGH, Priority.BINARY_LOW)
    d = Domain.from_bounds([(0, 9)] * 5)
    assert e.reprioritize(f, f.priority, d) == f.priority
    assert Engine().reprioritize(f, f.priority, Domain.from_bounds([(0, 0)] * 5)) == f.priority


def test_dynamic_priorities_move_alpha_linears():
    levels = []
    e_cfg = EngineConfig(dynamic_priorities=True)
    spec = build_model("alpha")
    from fdprop.search import search

    e = Engine(e_cfg, trace=lambda ev: levels.append((ev["prop"].name, ev["level"])))
    sp = Space(spec.model.domain())
    search(e, sp, e.post(sp, spec.model.propagators()), spec.model.brancher, spec.model.mode, node_limit=50)
    lin = {lv for name, lv in levels if name == "linear"}
    assert lin & {Priority.BINARY_HIGH, Priority.BINARY_LOW, Priority.TERNARY_HIGH, Priority.TERNARY_LOW}


@pytest.mark.parametrize("complete", [False, True])
def test_priority_discipline_and_dedup(complete):
    seen = []

    def hook(ev):
        seen.append((ev["level"], ev["queue"], ev["pid"]))

    e = Engine(EngineConfig(complete_fixpoints=complete), trace=hook)
    from fdprop.search import search

    spec = build_model("queens", 6)
    sp = Space(spec.model.domain())
    search(e, sp, e.post(sp, spec.model.propagators()), spec.model.brancher, "all")
    assert seen
    for level, queue, pid in seen:
        flat = [p for lv in queue for p in lv]
        assert len(flat) == len(set(flat)) and pid not in flat
        if not complete:
            assert all(not queue[i] for i in range(level))


# -- audit ---------------------------------------------------------------------


class _Lazy(Engine):
    """Planted bug: never wakes anything."""

    def new_policy(self, space, q, pid, status, batch, next_stage=None):
        return None


def test_audit_catches_suppressed_enqueue():
    spec = build_model("queens", 6)
    e = _Lazy(audit=True)
    with pytest.raises(InvariantViolation):
        sp = Space(spec.model.domain())
        e.isolv(sp, e.post(sp, spec.model.propagators()))
        from fdprop.search import search

        search(e, sp, [], spec.model.brancher, "all")


class _OnePassRegular(Regular):
    idempotent = True

    def propagate(self, d):
        st = super().propagate(d)
        return PropStatus.AT_FIXPOINT if st == PropStatus.UNKNOWN else st


def test_audit_flags_wrong_fixpoint_claim_on_aliased_regular():
    dfa = DFA.build(0, {3}, [(0, 1, 1), (1, 1, 2), (0, 0, 4), (4, 0, 2), (2, 0, 3)])
    e = Engine()
    sp = Space(Domain.from_values([[0, 1], [0, 1]]))
    assert e.isolv(sp, [_OnePassRegular((0, 1, 0), dfa)])
    assert debug_audit(sp) == [0]
    e = Engine()
    sp = Space(Domain.from_values([[0, 1], [0, 1]]))
    assert e.isolv(sp, [Regular((0, 1, 0), dfa)])
    assert debug_audit(sp) == [] and [set(s) for s in sp.domain.sets] == [{0}, {0}]


def test_audit_clean_after_isolv():
    for name in ("queens", "magic-square", "partition"):
        r = run(build_model(name, {"queens": 6, "magic-square": 3}.get(name)), EngineConfig(), audit=True, node_limit=30)
        assert r.steps > 0
