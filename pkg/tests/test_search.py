import itertools

import pytest

from fdprop import Brancher, Domain, Engine, EngineConfig, Space, search, solve
from fdprop.bench import oracles
from fdprop.bench.models import build_model
from fdprop.bench.sweep import run
from fdprop.domain import is_stronger
from fdprop.propagators import LeqOffset, Member, NeqOffset


def _bounds(props):
    return [(f.values.min, f.values.max) for [f] in props]


def test_branch_rules():
    d = Domain.from_bounds([(2, 5)])
    b = Brancher().branch(d)
    assert [f.values.min for [f] in b] == [2, 3] and b[0][0].values.max == 2
    assert _bounds(Brancher(value="split_le_ge").branch(Domain.from_bounds([(0, 9)])))[0][1] == 4
    assert _bounds(Brancher(value="split_le_ge").branch(Domain.from_bounds([(0, 9)])))[1][0] == 5
    with pytest.raises(ValueError):
        Brancher().branch(Domain.from_bounds([(4, 4)]))
    with pytest.raises(ValueError):
        Brancher(select="random")


def test_selection_rules():
    d = Domain.from_values([[1], [0, 1, 2], [5, 6]])
    assert Brancher().choose(d) == 1
    assert Brancher(select="min_size").choose(d) == 2
    assert Brancher(vars=(2, 1), select="first_unfixed").choose(d) == 1
    assert Brancher(vars=(2, 1)).choose(d) == 2


def test_intro_first_solution():
    r = run(build_model("intro"), EngineConfig(), check=True)
    assert r.found == [(2, 1, 1)]


def test_fixed_state_is_a_solution_without_branching():
    res = solve(Domain.from_values([[1], [2]]), [NeqOffset(0, 1)])
    assert res.outcome == "sat" and res.solutions == [(1, 2)] and res.stats["nodes"] == 0


def test_unsat():
    res = solve(Domain.from_bounds([(0, 1)] * 3), [NeqOffset(0, 1), NeqOffset(1, 2), NeqOffset(0, 2)], mode="all")
    assert res.outcome == "unsat" and res.solutions == []


@pytest.mark.parametrize("n", [4, 5, 6])
def test_queens_matches_brute_force(n):
    spec = build_model("queens", n)
    r = run(spec, EngineConfig(), check=True)
    brute = oracles.brute_solutions(spec.model.init, spec.model.constraints())
    assert sorted(r.found) == sorted(spec.model.view(s) for s in brute)
    assert len(set(r.found)) == r.solutions == oracles.queens_count(n)


def _all_solutions(name, n):
    spec = build_model(name, n)
    m = spec.model
    e = Engine()
    sp = Space(m.domain())
    res = search(e, sp, e.post(sp, m.propagators()), Brancher(), "all", check=True)
    return sorted(set(m.view(s) for s in res.solutions))


@pytest.mark.parametrize("name,n", [("minsort", 3), ("min-chain", 2), ("exactly", 2)])
def test_all_mode_matches_brute_force(name, n):
    m = build_model(name, n).model
    brute = oracles.brute_solutions(m.init, m.constraints())
    assert _all_solutions(name, n) == sorted(set(m.view(s) for s in brute))


def _is_magic(p, n=3):
    rows = [p[i * n:(i + 1) * n] for i in range(n)]
    lines = rows + [list(c) for c in zip(*rows)]
    lines += [[rows[i][i] for i in range(n)], [rows[i][n - 1 - i] for i in range(n)]]
    return all(sum(l) == n * (n * n + 1) // 2 for l in lines)


def test_projected_solution_sets():
    # auxiliary variables make the full product too large; enumerate the outputs
    ai = [p for p in itertools.permutations(range(6)) if len({abs(p[i + 1] - p[i]) for i in range(5)}) == 5]
    assert _all_solutions("all-interval", 6) == sorted(ai)
    assert _all_solutions("magic-square", 3) == sorted(p for p in itertools.permutations(range(1, 10)) if _is_magic(p))
    assert _all_solutions("partition", 4) == sorted(oracles.partitions(4))


def test_copy_isolation():
    e = Engine()
    sp, ok = e.solve_root(Domain.from_bounds([(0, 5), (0, 5)]), [LeqOffset(0, 1, -1)])
    child = sp.copy()
    assert is_stronger(child.domain, sp.domain) and is_stronger(sp.domain, child.domain)
    assert not e.isolv(child, [Member.eq(1, 0)])
    assert (sp.domain.min(1), sp.domain.max(1)) == (1, 5)
    assert sp.deps.subscriptions(0) == child.deps.subscriptions(0) or not child.alive[0]


def test_node_limit():
    r = run(build_model("queens", 8), EngineConfig(), node_limit=5)
    assert not r.complete and r.nodes == 5


def test_branch_and_bound_matches_oracle():
    r = run(build_model("golomb", 5), EngineConfig(), check=True)
    assert r.objective == oracles.golomb_optimum(5) == 11 and r.outcome == "optimal"


def test_best_needs_objective():
    with pytest.raises(ValueError):
        solve(Domain.from_bounds([(0, 1)]), [], mode="best")
