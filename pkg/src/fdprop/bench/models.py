"""Built-in benchmark models at desk scale, plus tiny trace models and
unit models for single propagators."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from ..errors import SizeOutOfRange, UnknownModel
from ..intset import IntSet
from ..model import Model
from ..propagators import (
    Abs,
    AlldiffDomain,
    DFA,
    Exactly,
    GuardedLeq,
    LeqOffset,
    LinearBounds,
    Member,
    MinProp,
    Mult,
    NeqOffset,
    Plus,
    Regular,
)
from ..search import Brancher

__all__ = ["ModelSpec", "REGISTRY", "TINY", "UNIT", "build_model", "model_names", "PICTURE_SMALL"]


@dataclass
class ModelSpec:
    """A built model with its expected results.

    ``expected`` maps ``solutions`` (count), ``unique`` (output view of the
    only solution), ``first`` (output view of the first solution) or
    ``optimum`` to a value; ``sources`` says where each value comes from.
    ``trigger`` holds propagators added after the root fixpoint.
    """

    name: str
    size: int | None
    model: Model
    expected: dict = field(default_factory=dict)
    sources: dict = field(default_factory=dict)
    trigger: list = field(default_factory=list)


@dataclass(frozen=True)
class _Entry:
    build: Callable[[int], ModelSpec]
    default: int | None
    sizes: tuple[int, int] | None


def _spec(m: Model, size, expected=None, sources=None) -> ModelSpec:
    return ModelSpec(m.name, size, m, dict(expected or {}), dict(sources or {}))


# -- registry models ----------------------------------------------------------


def queens(n: int) -> ModelSpec:
    m = Model(f"queens-{n}")
    q = m.vars("q", n, 0, n - 1)
    for i in range(n):
        for j in range(i + 1, n):
            m.post(NeqOffset(q[i], q[j], 0), NeqOffset(q[i], q[j], i - j), NeqOffset(q[i], q[j], j - i))
    m.brancher = Brancher(tuple(q), "first_unfixed", "eq_inf_vs_geq")
    m.mode = "all" if n <= 8 else "first"
    exp = {"solutions": QUEENS_COUNTS[n]} if m.mode == "all" and n in QUEENS_COUNTS else {}
    return _spec(m, n, exp, {k: "brute-force permutation enumeration" for k in exp})


QUEENS_COUNTS = {4: 2, 5: 10, 6: 4, 7: 40, 8: 92}


def queens_a(n: int) -> ModelSpec:
    m = Model(f"queens-a-{n}")
    q = m.vars("q", n, 0, n - 1)
    m.alldiff(q)
    m.alldiff(q, offsets=list(range(n)))
    m.alldiff(q, offsets=[-i for i in range(n)])
    m.brancher = Brancher(tuple(q), "first_unfixed", "eq_inf_vs_geq")
    m.mode = "all" if n <= 8 else "first"
    exp = {"solutions": QUEENS_COUNTS[n]} if m.mode == "all" and n in QUEENS_COUNTS else {}
    return _spec(m, n, exp, {k: "brute-force permutation enumeration" for k in exp})


ALPHA_WORDS = {
    "ballet": 45, "cello": 43, "concert": 74, "flute": 30, "fugue": 50,
    "glee": 66, "jazz": 58, "lyre": 47, "oboe": 53, "opera": 65,
    "polka": 59, "quartet": 50, "saxophone": 134, "scale": 51, "solo": 37,
    "song": 61, "soprano": 82, "theme": 72, "violin": 100, "waltz": 34,
}


def alpha(_n: int = 26) -> ModelSpec:
    m = Model("alpha")
    letters = "abcdefghijklmnopqrstuvwxyz"
    v = {c: m.var(c, 1, 26) for c in letters}
    for word, total in ALPHA_WORDS.items():
        coef: dict[str, int] = {}
        for c in word:
            coef[c] = coef.get(c, 0) + 1
        m.linear(list(coef.values()), [v[c] for c in coef], total)
    m.alldiff(list(v.values()))
    m.brancher = Brancher(tuple(v.values()), "min_size", "eq_inf_vs_geq")
    m.mode = "all"
    return _spec(m, None, {"solutions": 1}, {"solutions": "exhaustive search cross-checked against the word sums"})


def _cryptarithm_coefficients(terms: list[str], result: str) -> dict[str, int]:
    coef: dict[str, int] = {}
    for word in terms:
        for i, c in enumerate(reversed(word)):
            coef[c] = coef.get(c, 0) + 10**i
    for i, c in enumerate(reversed(result)):
        coef[c] = coef.get(c, 0) - 10**i
    return coef


DONALD_SOLUTION = {"d": 5, "o": 2, "n": 6, "a": 4, "l": 8, "g": 1, "e": 9, "r": 7, "b": 3, "t": 0}


def donald(variant: str) -> ModelSpec:
    """DONALD + GERALD = ROBERT. ``b`` uses bounds(Z) alldifferent, ``d``
    domain strength for both constraints and ``v`` naive alldifferent."""
    m = Model(f"donald-{variant}")
    letters = "donalgerbt"
    v = {c: m.var(c, 1 if c in "dgr" else 0, 9) for c in letters}
    coef = _cryptarithm_coefficients(["donald", "gerald"], "robert")
    keys = [c for c in letters if coef.get(c, 0)]
    lin = "domain" if variant == "d" else "bounds"
    ad = {"b": "bounds", "d": "domain", "v": "naive"}[variant]
    m.linear([coef[c] for c in keys], [v[c] for c in keys], 0, strength=lin)
    m.alldiff(list(v.values()), strength=ad)
    m.brancher = Brancher(tuple(v.values()), "input_order", "eq_inf_vs_geq")
    m.mode = "all"
    m.outputs = list(v.values())
    sol = tuple(DONALD_SOLUTION[c] for c in letters)
    return _spec(m, None, {"unique": sol}, {"unique": "brute force over digit permutations"})


GOLOMB_OPTIMA = {4: 6, 5: 11, 6: 17, 7: 25, 8: 34}


def golomb(n: int) -> ModelSpec:
    m = Model(f"golomb-{n}")
    ub = n * n
    marks = [m.var("m0", 0, 0)] + [m.var(f"m{i}", 1, ub) for i in range(1, n)]
    for i in range(n - 1):
        m.post(LeqOffset(marks[i], marks[i + 1], -1))
    diffs = {}
    for i in range(n):
        for j in range(i + 1, n):
            k = j - i
            d = m.var(f"d{i}_{j}", k * (k + 1) // 2, ub)
            diffs[i, j] = d
            m.post(Plus(marks[j], d, marks[i]))
    m.alldiff(list(diffs.values()), strength="bounds")
    if n > 2:
        m.post(LeqOffset(diffs[0, 1], diffs[n - 2, n - 1], -1))
    m.brancher = Brancher(tuple(marks), "input_order", "eq_inf_vs_geq")
    m.mode = "best"
    m.objective = (marks[-1], "min")
    m.outputs = marks
    exp = {"optimum": GOLOMB_OPTIMA[n]} if n in GOLOMB_OPTIMA else {}
    return _spec(m, n, exp, {k: "exhaustive enumeration of mark sets" for k in exp})


ALL_INTERVAL_COUNTS = {4: 4, 5: 8, 6: 24, 7: 32, 8: 40}


def all_interval(n: int) -> ModelSpec:
    m = Model(f"all-interval-{n}")
    x = m.vars("x", n, 0, n - 1)
    dist = []
    for i in range(n - 1):
        t = m.var(f"t{i}", -(n - 1), n - 1)
        d = m.var(f"d{i}", 1, n - 1)
        m.post(Plus(x[i + 1], t, x[i]), Abs(t, d))
        dist.append(d)
    m.alldiff(x)
    m.alldiff(dist, strength="bounds")
    m.brancher = Brancher(tuple(x), "input_order", "eq_inf_vs_geq")
    m.mode = "all" if n <= 8 else "first"
    m.outputs = x
    exp = {"solutions": ALL_INTERVAL_COUNTS[n]} if m.mode == "all" and n in ALL_INTERVAL_COUNTS else {}
    return _spec(m, n, exp, {k: "brute-force permutation enumeration" for k in exp})


def magic_sequence(n: int) -> ModelSpec:
    m = Model(f"magic-sequence-{n}")
    s = m.vars("s", n, 0, n - 1)
    for i in range(n):
        m.post(Exactly(s, s[i], i))
    m.linear([1] * n, s, n)
    m.linear(list(range(n)), s, n)
    m.brancher = Brancher(tuple(s), "input_order", "eq_inf_vs_geq")
    m.mode = "all"
    exp = {}
    if n >= 7:
        exp["unique"] = (n - 4, 2, 1) + (0,) * (n - 7) + (1, 0, 0, 0)
    return _spec(m, n, exp, {k: "exhaustive enumeration of count vectors" for k in exp})


def magic_square(n: int) -> ModelSpec:
    m = Model(f"magic-square-{n}")
    x = m.vars("x", n * n, 1, n * n)
    total = n * (n * n + 1) // 2
    m.alldiff(x, strength="domain")
    for i in range(n):
        m.linear([1] * n, [x[i * n + j] for j in range(n)], total)
        m.linear([1] * n, [x[j * n + i] for j in range(n)], total)
    m.linear([1] * n, [x[i * n + i] for i in range(n)], total)
    m.linear([1] * n, [x[i * n + n - 1 - i] for i in range(n)], total)
    m.brancher = Brancher(tuple(x), "min_size", "split_le_ge")
    m.mode = "first"
    return _spec(m, n)


def minsort(n: int) -> ModelSpec:
    """Distinct values in strictly decreasing order, expressed through the
    chain of prefix minima p[i] = min(p[i-1], x[i])."""
    m = Model(f"minsort-{n}")
    x = m.vars("x", n, 0, 2 * n)
    p = [x[0]] + [m.var(f"p{i}", 0, 2 * n) for i in range(1, n)]
    for i in range(1, n):
        m.post(MinProp(p[i], p[i - 1], x[i]))
        m.post(LeqOffset(x[i], p[i - 1], -1))
    m.alldiff(x)
    m.brancher = Brancher(tuple(x), "input_order", "eq_inf_vs_geq")
    m.mode = "first"
    m.outputs = x
    return _spec(m, n, {"first": tuple(range(n - 1, -1, -1))},
                 {"first": "lower bounds forced by the strict order"})


def grocery(_n: int = 4) -> ModelSpec:
    """Four prices summing to 711 cents whose product is 711 dollars."""
    m = Model("grocery")
    a, b, c, d = (m.var(k, 0, 711) for k in "abcd")
    ab = m.var("ab", 0, 711 * 711)
    abc = m.var("abc", 0, 711_000_000)
    prod = m.var("abcd", 711_000_000, 711_000_000)
    m.post(Mult(a, b, ab), Mult(ab, c, abc), Mult(abc, d, prod))
    m.linear([1, 1, 1, 1], [a, b, c, d], 711)
    m.post(LeqOffset(a, b), LeqOffset(b, c), LeqOffset(c, d))
    m.brancher = Brancher((d, c, b, a), "input_order", "split_le_ge")
    m.mode = "all"
    m.outputs = [a, b, c, d]
    return _spec(m, None, {"unique": (120, 125, 150, 316)}, {"unique": "enumeration over ordered price triples"})


def partition(n: int) -> ModelSpec:
    """Split 1..2n into two blocks of n with equal sums and equal sums of
    squares."""
    m = Model(f"partition-{n}")
    hi = 2 * n
    x = m.vars("x", n, 1, hi)
    y = m.vars("y", n, 1, hi)
    m.alldiff(x + y, strength="domain")
    for v in (x, y):
        for i in range(n - 1):
            m.post(LeqOffset(v[i], v[i + 1], -1))
    m.post(Member.eq(x[0], 1))
    sx = [m.var(f"sx{i}", 1, hi * hi) for i in range(n)]
    sy = [m.var(f"sy{i}", 1, hi * hi) for i in range(n)]
    for v, s in ((x, sx), (y, sy)):
        for a, b in zip(v, s):
            m.post(Mult(a, a, b))
    total = hi * (hi + 1) // 2
    squares = hi * (hi + 1) * (2 * hi + 1) // 6
    m.linear([1] * n, x, total // 2)
    m.linear([1] * n, y, total // 2)
    m.linear([1] * n, sx, squares // 2)
    m.linear([1] * n, sy, squares // 2)
    m.brancher = Brancher(tuple(x + y), "input_order", "eq_inf_vs_geq")
    m.mode = "first"
    m.outputs = x + y
    exp = {"first": (1, 4, 6, 7, 2, 3, 5, 8)} if n == 4 else {}
    return _spec(m, n, exp, {k: "enumeration of 4-subsets of 1..8" for k in exp})


PICTURE_SMALL = (
    "..####....",
    ".##..##...",
    "##....##..",
    "#..##..#..",
    "#..##..###",
    "##....##.#",
    ".##..##..#",
    "..####...#",
    "....#....#",
    "...###.###",
)


def _runs(cells) -> list[int]:
    out, r = [], 0
    for c in cells:
        if c:
            r += 1
        elif r:
            out.append(r)
            r = 0
    if r:
        out.append(r)
    return out


def picture_small(_n: int = 10) -> ModelSpec:
    rows = [[c == "#" for c in line] for line in PICTURE_SMALL]
    h, w = len(rows), len(rows[0])
    m = Model("picture-small")
    g = [[m.var(f"c{i}_{j}", 0, 1) for j in range(w)] for i in range(h)]
    for i in range(h):
        m.post(Regular(g[i], DFA.from_runs(_runs(rows[i]))))
    for j in range(w):
        m.post(Regular([g[i][j] for i in range(h)], DFA.from_runs(_runs(r[j] for r in rows))))
    flat = tuple(v for r in g for v in r)
    m.brancher = Brancher(flat, "input_order", "eq_inf_vs_geq")
    m.mode = "all"
    sol = tuple(int(c) for r in rows for c in r)
    return _spec(m, None, {"unique": sol}, {"unique": "the drawn picture; uniqueness checked by exhaustive search"})


# -- tiny trace models --------------------------------------------------------


def incremental(_n: int = 0) -> ModelSpec:
    """x1 = 2 x2 and x1 = 3 x3 as bounds propagators that update the
    right-hand variable before x1."""
    m = Model("incremental")
    x1, x2, x3 = m.var("x1", 0, 17), m.var("x2", 0, 9), m.var("x3", 0, 6)
    m.post(
        LinearBounds((1, -2), (x1, x2), 0, sweep="gauss_seidel", order=(x2, x1)),
        LinearBounds((1, -3), (x1, x3), 0, sweep="gauss_seidel", order=(x3, x1)),
    )
    return _spec(m, None)


def repeated_fixpoints(_n: int = 0) -> ModelSpec:
    """The incremental pair plus a guarded inequality and a domain
    alldifferent; the propagation is triggered by x1 <= 17."""
    m = Model("repeated-fixpoints")
    x = [m.var("x1", 0, 18), m.var("x2", 0, 9), m.var("x3", 0, 6), m.var("x4", 0, 3), m.var("x5", 0, 3)]
    m.post(
        LinearBounds((1, -2), (x[0], x[1]), 0, sweep="gauss_seidel", order=(x[1], x[0])),
        LinearBounds((1, -3), (x[0], x[2]), 0, sweep="gauss_seidel", order=(x[2], x[0])),
        GuardedLeq(x[1], 6, x[0], x[2], 7),
        AlldiffDomain(x),
    )
    spec = _spec(m, None)
    spec.trigger = [Member.leq(x[0], 17)]
    return spec


def intro(_n: int = 0) -> ModelSpec:
    """x3 = x2, x1 <= x2 + 1, x1 != 3; split on x2 first."""
    m = Model("intro")
    x1 = m.var("x1", [2, 3, 4])
    x2 = m.var("x2", 0, 3)
    x3 = m.var("x3", -1, 2)
    m.linear([1, -1], [x3, x2], 0, strength="domain")
    m.post(LeqOffset(x1, x2, 1), Member(x1, IntSet.of([2, 4])))
    m.brancher = Brancher((x2, x1, x3), "input_order", "split_le_ge")
    m.mode = "first"
    return _spec(m, None, {"first": (2, 1, 1)}, {"first": "hand derivation"})


# -- unit models --------------------------------------------------------------


def min_chain(n: int) -> ModelSpec:
    """z[i] = min(x[i], y[i]) with every y above every x, so the y inputs
    stop mattering once z is bounded; search enumerates the y values only."""
    m = Model(f"min-chain-{n}")
    xs = m.vars("x", n, 0, 2)
    ys = m.vars("y", n, 3, 5)
    zs = m.vars("z", n, 0, 5)
    for i in range(n):
        m.post(MinProp(zs[i], xs[i], ys[i]))
    for i in range(n - 1):
        m.post(LeqOffset(zs[i], zs[i + 1]))
    m.brancher = Brancher(tuple(ys), "input_order", "eq_inf_vs_geq")
    m.mode = "all"
    return _spec(m, n)


def exactly_unit(n: int) -> ModelSpec:
    """One count per value over a short sequence. Splitting a domain takes
    value k out of it, after which that variable cannot change count k."""
    m = Model(f"exactly-{n}")
    xs = m.vars("x", n, 0, 7)
    counts = [m.var(f"c{k}", 0, n) for k in range(8)]
    for k in range(8):
        m.post(Exactly(xs, counts[k], k))
    m.linear([1] * 8, counts, n)
    m.post(Member.leq(counts[0], 1))
    m.brancher = Brancher(tuple(xs), "input_order", "split_le_ge")
    m.mode = "all"
    return _spec(m, n)


# -- registry -----------------------------------------------------------------

REGISTRY: dict[str, _Entry] = {
    "queens": _Entry(queens, 8, (4, 100)),
    "queens-a": _Entry(queens_a, 8, (4, 100)),
    "alpha": _Entry(alpha, None, None),
    "donald-b": _Entry(lambda n: donald("b"), None, None),
    "donald-d": _Entry(lambda n: donald("d"), None, None),
    "donald-v": _Entry(lambda n: donald("v"), None, None),
    "golomb": _Entry(golomb, 7, (3, 8)),
    "all-interval": _Entry(all_interval, 8, (4, 12)),
    "magic-sequence": _Entry(magic_sequence, 10, (4, 20)),
    "magic-square": _Entry(magic_square, 4, (3, 5)),
    "minsort": _Entry(minsort, 20, (3, 50)),
    "grocery": _Entry(grocery, None, None),
    "partition": _Entry(partition, 4, (3, 8)),
    "picture-small": _Entry(picture_small, None, None),
}

TINY: dict[str, _Entry] = {
    "incremental": _Entry(incremental, None, None),
    "repeated-fixpoints": _Entry(repeated_fixpoints, None, None),
    "intro": _Entry(intro, None, None),
}

UNIT: dict[str, _Entry] = {
    "min-chain": _Entry(min_chain, 3, (1, 6)),
    "exactly": _Entry(exactly_unit, 3, (2, 5)),
}


def model_names() -> list[str]:
    return [*REGISTRY, *TINY, *UNIT]


def build_model(name: str, n: int | None = None) -> ModelSpec:
    for table in (REGISTRY, TINY, UNIT):
        if name in table:
            entry = table[name]
            break
    else:
        raise UnknownModel(f"unknown model {name!r}; known: {', '.join(model_names())}")
    if entry.sizes is None:
        if n is not None and n != entry.default:
            raise SizeOutOfRange(f"{name} has no size parameter")
        return entry.build(entry.default)
    if n is None:
        n = entry.default
    lo, hi = entry.sizes
    if not lo <= n <= hi:
        raise SizeOutOfRange(f"{name} size must be in [{lo}, {hi}], got {n}")
    return entry.build(n)
