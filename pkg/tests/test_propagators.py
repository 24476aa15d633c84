import itertools

import pytest
from hypothesis import assume, given, settings, strategies as st

from fdprop.bench.checks import checking_mismatches
from fdprop.domain import Domain, is_stronger
from fdprop.errors import EnumerationCapExceeded, MalformedAutomaton
from fdprop.events import classify, describe, merge
from fdprop.intset import IntSet
from fdprop.propagators import (
    DFA, Abs, AlldiffBounds, AlldiffDomain, AlldiffNaive, BoolSum, DomGeneric, Even, Exactly, GuardedLeq,
    Immediate, LeqOffset, Lex, LinearBounds, LinearDomain, MinProp, Mult, NeqOffset, Plus, PropStatus,
    Regular, StagedAlldiff, StagedLinear, apply, dom_generic, zbnd_wrap,
)

V = Domain.from_values
B = Domain.from_bounds
FAILED, SUBSUMED, AT_FIXPOINT, UNKNOWN = (
    PropStatus.FAILED, PropStatus.SUBSUMED, PropStatus.AT_FIXPOINT, PropStatus.UNKNOWN,
)


def sets_of(d):
    return [set(s) for s in d.sets]


# (11|00)0 over {0,1}
DFA_110 = DFA.build(0, {3}, [(0, 1, 1), (1, 1, 2), (0, 0, 4), (4, 0, 2), (2, 0, 3)])


# -- worked examples -----------------------------------------------------------


def test_leq_examples():
    d, s = apply(LeqOffset(0, 1, 1), V([[1, 5, 8], [1, 5]]))
    assert sets_of(d) == [{1, 5}, {1, 5}]
    d, s = apply(LeqOffset(0, 1, 1), B([(1, 3), (3, 7)]))
    assert d == B([(1, 3), (3, 7)]) and s == SUBSUMED
    assert apply(LeqOffset(0, 1), V([[5], [4]]))[1] == FAILED


def test_neq_examples():
    d, _ = apply(NeqOffset(0, 1, 0), V([[2, 3], [3]]))
    assert sets_of(d)[0] == {2}
    assert apply(NeqOffset(0, 1, 0), B([(0, 2), (5, 9)]))[1] == SUBSUMED
    assert apply(NeqOffset(0, 1, 0), V([[4], [4]]))[1] == FAILED


def test_alldiff_naive_examples():
    n = 6
    d = V([[4, 6], [6, 9], [6]] + [range(1, n + 1)] * (n - 3))
    out, _ = apply(AlldiffNaive(range(n)), d)
    assert all(6 not in out[x] for x in range(n) if x != 2)
    assert apply(AlldiffNaive((0, 1)), V([[3], [3]]))[1] == FAILED
    assert apply(AlldiffNaive((0, 1, 2)), V([[1], [2], [3]]))[1] == SUBSUMED


def test_alldiff_bounds_and_domain_examples():
    d = B([(0, 6), (0, 3), (0, 2), (0, 3), (0, 3)])
    out, _ = apply(AlldiffBounds(range(5)), d)
    assert (out.min(0), out.max(0)) == (4, 6)
    out, st = apply(AlldiffDomain(range(5)), d)
    assert set(out[0]) == {4, 5, 6} and st != FAILED
    assert apply(AlldiffBounds((0,)), B([(1, 1)]))[1] == SUBSUMED


def test_min_examples():
    f = MinProp(0, 1, 2)
    d = B([(1, 3), (0, 10), (5, 7)])
    assert describe(f.monotonic_events(d)) == {"lbc(x0)", "lbc(x1)", "ubc(x1)"}
    d = B([(5, 9), (6, 9), (5, 10)])
    assert describe(f.dynamic_events(d)) == {"lbc(x0)", "ubc(x1)", "lbc(x2)", "ubc(x2)"}
    out, _ = apply(f, B([(0, 9), (3, 3), (7, 7)]))
    assert sets_of(out)[0] == {3}


def test_exactly_examples():
    out, st = apply(Exactly((0, 1, 2), 3, 1), V([[0, 1]] * 3 + [[3]]))
    assert sets_of(out) == [{1}, {1}, {1}, {3}] and st == SUBSUMED
    out, _ = apply(Exactly((0, 1, 2), 3, 1), V([[1], [0, 2], [1, 2], range(4)]))
    assert sets_of(out)[3] == {1, 2}
    # a variable that cannot take k is dropped from the event set
    f = Exactly((0, 1, 2), 3, 1)
    es = f.monotonic_events(V([[2, 5, 6, 10, 11, 12], [0, 1], [1, 2], range(4)]))
    assert 0 not in es and 1 in es


def test_linear_bounds_examples():
    f = LinearBounds((3, -2), (0, 1), 0)
    d1, s1 = apply(f, B([(0, 3), (0, 5)]))
    assert d1 == B([(0, 3), (0, 4)]) and s1 == UNKNOWN
    d2, _ = apply(f, d1)
    assert d2 == B([(0, 2), (0, 4)])
    d3, s3 = apply(f, B([(0, 2), (0, 4)]))
    assert d3 == B([(0, 2), (0, 3)]) and s3 == AT_FIXPOINT


def test_linear_domain_examples():
    out, st = apply(LinearDomain((3, -2), (0, 1), 0), B([(0, 3), (0, 5)]))
    assert sets_of(out) == [{0, 2}, {0, 3}]
    # supports of x1 + x2 = 4 are (1, 3) and (3, 1)
    out, _ = apply(LinearDomain((1, 1), (0, 1), 4), V([range(0, 5), [1, 3]]))
    assert sets_of(out) == [{1, 3}, {1, 3}]
    assert apply(LinearDomain((1, 1), (0, 1), 4), V([[0, 4], [1, 3]]))[1] == FAILED
    assert apply(LinearDomain((1, 1), (0, 1), 4), V([[1], [3]]))[1] == SUBSUMED


def test_generic_examples():
    pred = lambda v: 3 * v[0] == 2 * v[1]
    out, st = dom_generic((0, 1), pred, B([(0, 3), (0, 5)]))
    assert sets_of(out) == [{0, 2}, {0, 3}]
    out, st = zbnd_wrap((0, 1), pred, B([(0, 3), (0, 5)]))
    assert out == B([(0, 2), (0, 3)])
    assert dom_generic((0, 1), pred, V([[2], [3]]))[0] == V([[2], [3]])
    assert dom_generic((0, 1), pred, V([[1], [3]]))[1] == FAILED
    distinct = lambda v: len(set(v)) == len(v)
    out, _ = zbnd_wrap(range(5), distinct, B([(0, 6), (0, 3), (0, 2), (0, 3), (0, 3)]))
    assert (out.min(0), out.max(0)) == (4, 6)
    with pytest.raises(EnumerationCapExceeded):
        dom_generic((0, 1, 2), pred, B([(0, 99)] * 3), cap=1000)


def test_even_bool_sum_lex():
    out, _ = apply(Even(0), B([(1, 7)]))
    assert (out.min(0), out.max(0)) == (2, 6)
    out, st = apply(BoolSum((0, 1, 2, 3), "<=", 2), V([[1], [1], [0, 1], [0, 1]]))
    assert sets_of(out) == [{1}, {1}, {0}, {0}]
    out, st = apply(BoolSum((0, 1, 2), "=", 3), V([[0, 1]] * 3))
    assert sets_of(out) == [{1}] * 3 and st == SUBSUMED
    # shared head: [x0, x1] <=lex [x0, x2] with x1 > x2
    assert apply(Lex((0, 1), (0, 2)), B([(0, 9), (3, 5), (0, 2)]))[1] == FAILED


def test_regular_examples():
    out, st = apply(Regular((0, 1, 2), DFA_110), V([[0, 1]] * 3))
    assert sets_of(out)[2] == {0} and st == AT_FIXPOINT
    f = Regular((0, 1, 0), DFA_110)
    out, st = apply(f, V([[0, 1]] * 2))
    assert sets_of(out) == [{0}, {0, 1}] and st == UNKNOWN
    out, _ = apply(f, out)
    assert sets_of(out) == [{0}, {0}]
    with pytest.raises(MalformedAutomaton):
        DFA.build(0, {1}, [(0, 0, 1), (0, 0, 2)])
    with pytest.raises(MalformedAutomaton):
        Regular((0, 1), DFA.build(0, {3}, [(0, 0, 1), (1, 0, 2), (2, 0, 3)]))


# -- generic properties --------------------------------------------------------

PROPS = [
    LeqOffset(0, 1, 1),
    LeqOffset(0, 0, 0),
    NeqOffset(0, 1, -1),
    Abs(0, 1),
    Even(2),
    Mult(0, 1, 2),
    Plus(0, 1, 2),
    MinProp(0, 1, 2),
    MinProp(0, 0, 1),
    GuardedLeq(0, 1, 2, 3, 0),
    LinearBounds((2, -1, 3), (0, 1, 2), 2),
    LinearBounds((1, 1), (0, 1), 3, sweep="gauss_seidel"),
    LinearDomain((2, -1, 3), (0, 1, 2), 2),
    AlldiffNaive((0, 1, 2, 3)),
    AlldiffBounds((0, 1, 2, 3)),
    AlldiffDomain((0, 1, 2, 3)),
    Exactly((0, 1, 2), 3, 1),
    Exactly((0, 1, 2), 1, 1),
    Lex((0, 1), (2, 3)),
    Regular((0, 1, 2), DFA_110),
    Regular((0, 1, 0), DFA_110),
    Immediate(AlldiffNaive((0, 1, 2)), AlldiffDomain((0, 1, 2))),
    StagedAlldiff((0, 1, 2, 3)),
    StagedLinear((1, 2, -1), (0, 1, 2), 1),
    DomGeneric((0, 1, 3), lambda v: v[0] + v[1] != v[2]),
]


def domains(lo=-2, hi=4):
    small = st.frozensets(st.integers(lo, hi), min_size=1, max_size=7)
    return st.lists(small, min_size=4, max_size=4).map(lambda vs: Domain(IntSet.of(v) for v in vs))


doms = domains()


@st.composite
def nested(draw, lo=-2, hi=4):
    """A domain and a stronger one."""
    d = draw(domains(lo, hi))
    sub = [IntSet.of(draw(st.frozensets(st.sampled_from(sorted(s)), min_size=1))) for s in d.sets]
    return d, Domain(sub)


@pytest.mark.parametrize("f", PROPS, ids=repr)
@settings(max_examples=100)
@given(pair=nested())
def test_contracting_and_monotone(f, pair):
    d, e = pair
    fd, sd = apply(f, d)
    fe, se = apply(f, e)
    assert fd.failed or is_stronger(fd, d)
    if sd == FAILED:
        assert se == FAILED
    elif se != FAILED:
        assert is_stronger(fe, fd)


@pytest.mark.parametrize("f", PROPS, ids=repr)
@settings(max_examples=100)
@given(d=doms)
def test_status_soundness(f, d):
    out, s = apply(f, d)
    if s == FAILED:
        # failure means no solution remains in d
        vals = [list(d[x]) for x in f.scope]
        sols = [t for t in itertools.product(*vals) if _consistent(f.scope, t) and f.satisfied(t)]
        assert sols == []
        return
    if s in (AT_FIXPOINT, SUBSUMED) or f.idempotent:
        again, s2 = apply(f, out)
        assert again == out and s2 != FAILED
    # no solution inside d is lost
    for t in itertools.product(*(list(d[x]) for x in f.vars)):
        if f.satisfied([t[f.vars.index(x)] for x in f.scope]):
            assert all(v in out[x] for x, v in zip(f.vars, t))
    if s == SUBSUMED:
        # every assignment left is a solution
        for t in itertools.product(*(list(out[x]) for x in f.vars)):
            assert f.satisfied([t[f.vars.index(x)] for x in f.scope])


def _consistent(scope, t):
    seen = {}
    return all(seen.setdefault(x, v) == v for x, v in zip(scope, t))


DYNAMIC = [
    MinProp(0, 1, 2),
    Exactly((0, 1, 2), 3, 1),
    BoolSum((0, 1, 2, 3), "<=", 2),
    BoolSum((0, 1, 2, 3), ">=", 2),
    BoolSum((0, 1, 2, 3), "=", 2),
]


def _fix(f, d):
    for _ in range(20):
        out, s = apply(f, d)
        if s == FAILED or out == d:
            return out, s
        d = out
    return d, s


@pytest.mark.parametrize("f", DYNAMIC, ids=repr)
@pytest.mark.parametrize("mode", ["monotonic", "full"])
@settings(max_examples=100)
@given(data=st.data())
def test_dynamic_event_sets_sound(f, mode, data):
    d, e = data.draw(nested(0, 1) if isinstance(f, BoolSum) else nested())
    d, s = _fix(f, d)
    assume(s not in (FAILED, SUBSUMED))
    es = f.monotonic_events(d) if mode == "monotonic" else f.dynamic_events(d)
    if es is None:
        es = f.subscriptions()
    e = Domain(a.intersect(b) for a, b in zip(d.sets, e.sets))
    assume(not e.failed)
    ev = {}
    for x in range(len(d)):
        ev = merge(ev, classify(Domain(d.sets).tighten(x, e[x])))
    if not any(ev.get(x, 0) & m for x, m in es.items()):
        out, st = apply(f, e)
        assert st != FAILED and out == e


# -- checking property ---------------------------------------------------------


@pytest.mark.parametrize(
    "f,nvars,values",
    [
        (MinProp(0, 1, 2), 3, range(5)),
        (Exactly((0, 1, 2), 3, 1), 4, range(4)),
        (Exactly((0, 1, 2), 2, 1), 3, range(4)),
        (Regular((0, 1, 2), DFA_110), 3, range(3)),
        (Regular((0, 1, 0), DFA_110), 2, range(3)),
        (Lex((0, 1), (2, 3)), 4, range(5)),
        (BoolSum((0, 1, 2, 3), "=", 2), 4, range(2)),
        (LinearBounds((3, -2), (0, 1), 0), 2, range(5)),
        (LinearBounds((1, 1, 1), (0, 1, 2), 5), 3, range(5)),
        (Mult(0, 1, 2), 3, range(-2, 3)),
        (Abs(0, 1), 2, range(-2, 3)),
        (GuardedLeq(0, 1, 2, 3, -1), 4, range(4)),
    ],
    ids=repr,
)
def test_checking_property(f, nvars, values):
    assert checking_mismatches(f, nvars, values) == []


def test_bool_sum_watch_set_size():
    # sum <= 3 over 10 undecided literals: any three new ones must hit a watch,
    # so at most two literals may go unwatched
    f = BoolSum(range(10), "<=", 3)
    d = Domain.from_bounds([(0, 1)] * 10)
    es = f.dynamic_events(d)
    assert len(es) == 8
    # a smaller set misses a propagation: three unwatched literals set to 1
    for watched in itertools.combinations(range(10), 4):
        free = [x for x in range(10) if x not in watched][:3]
        e = d.copy()
        for x in free:
            e.assign(x, 1)
        out, _ = apply(f, e)
        assert out != e
        break
