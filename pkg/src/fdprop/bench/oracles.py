"""Independent brute-force enumerations for the expected model results.

None of these use the propagation engine.
"""

from __future__ import annotations

import itertools
import math


def queens_count(n: int) -> int:
    count = 0
    for p in itertools.permutations(range(n)):
        if len({p[i] + i for i in range(n)}) == n and len({p[i] - i for i in range(n)}) == n:
            count += 1
    return count


def all_interval_count(n: int) -> int:
    count = 0
    for p in itertools.permutations(range(n)):
        if len({abs(p[i + 1] - p[i]) for i in range(n - 1)}) == n - 1:
            count += 1
    return count


def magic_sequences(n: int) -> list[tuple[int, ...]]:
    """All s with s[i] = #{j : s[j] = i}; a solution has sum(s) = n."""
    out = []

    def rec(prefix: list[int], left: int):
        i = len(prefix)
        if i == n:
            if left == 0 and all(prefix.count(v) == prefix[v] for v in range(n)):
                out.append(tuple(prefix))
            return
        for v in range(min(left, n - 1) + 1):
            prefix.append(v)
            rec(prefix, left - v)
            prefix.pop()

    rec([], n)
    return out


def golomb_optimum(n: int) -> int:
    """Shortest length of a ruler with n marks and distinct differences."""
    if n <= 1:
        return 0

    def fits(length: int) -> bool:
        marks = [0]
        diffs: set[int] = set()

        def rec() -> bool:
            if len(marks) == n - 1:
                new = {length - m for m in marks}
                return len(new) == n - 1 and not new & diffs
            for v in range(marks[-1] + 1, length):
                new = {v - m for m in marks}
                if len(new) == len(marks) and not new & diffs:
                    marks.append(v)
                    diffs.update(new)
                    if rec():
                        return True
                    diffs.difference_update(new)
                    marks.pop()
            return False

        return rec()

    length = n * (n - 1) // 2
    while not fits(length):
        length += 1
    return length


def cryptarithm(terms: list[str], result: str, nonzero: str = "") -> list[dict[str, int]]:
    """All digit assignments making sum(terms) == result, letters distinct.

    Letters are assigned column by column from the right and each finished
    column is checked modulo a power of ten.
    """
    width = max(len(w) for w in terms + [result])
    cols = [[w[-1 - i] for w in terms if i < len(w)] for i in range(width)]
    rcol = [result[-1 - i] if i < len(result) else None for i in range(width)]
    order: list[str] = []
    checks: list[int] = []
    for i in range(width):
        for c in cols[i] + ([rcol[i]] if rcol[i] else []):
            if c not in order:
                order.append(c)
        checks.append(len(order))
    sols = []
    val: dict[str, int] = {}

    def value(word: str, digits: int) -> int:
        return sum(val[c] * 10**j for j, c in enumerate(reversed(word)) if j < digits)

    def consistent(col: int) -> bool:
        mod = 10 ** (col + 1)
        return (sum(value(w, col + 1) for w in terms) - value(result, col + 1)) % mod == 0

    def rec(k: int, used: set[int]):
        for col, upto in enumerate(checks):
            if upto == k and not consistent(col):
                return
        if k == len(order):
            if sum(value(w, len(w)) for w in terms) == value(result, len(result)):
                sols.append(dict(val))
            return
        c = order[k]
        for v in range(1 if c in nonzero else 0, 10):
            if v not in used:
                val[c] = v
                used.add(v)
                rec(k + 1, used)
                used.discard(v)
                del val[c]

    rec(0, set())
    return sols


def grocery_solutions(total: int = 711, product: int = 711_000_000) -> list[tuple[int, ...]]:
    """Ordered prices a <= b <= c <= d; each must divide the product."""
    divs = [v for v in range(1, total + 1) if product % v == 0]
    out = []
    for i, a in enumerate(divs):
        for j in range(i, len(divs)):
            b = divs[j]
            for k in range(j, len(divs)):
                c = divs[k]
                d = total - a - b - c
                if d < c:
                    break
                if a * b * c * d == product:
                    out.append((a, b, c, d))
    return out


def partitions(n: int) -> list[tuple[int, ...]]:
    """Blocks x (containing 1) and y of 1..2n with equal sums and sums of squares."""
    nums = range(1, 2 * n + 1)
    out = []
    for x in itertools.combinations(nums, n):
        if x[0] != 1:
            continue
        y = tuple(v for v in nums if v not in x)
        if sum(x) == sum(y) and sum(v * v for v in x) == sum(v * v for v in y):
            out.append(x + y)
    return out


def nonogram_count(rows: list[list[int]], cols: list[list[int]], width: int, limit: int = 2) -> int:
    """Count pictures matching the clues (stops at ``limit``)."""

    def lines(runs: list[int], n: int) -> list[tuple[int, ...]]:
        res = []
        for line in itertools.product((0, 1), repeat=n):
            got, r = [], 0
            for c in line + (0,):
                if c:
                    r += 1
                elif r:
                    got.append(r)
                    r = 0
            if got == list(runs):
                res.append(line)
        return res

    row_opts = [lines(r, width) for r in rows]
    col_opts = [set(lines(c, len(rows))) for c in cols]
    count = 0

    def rec(i: int, chosen: list[tuple[int, ...]]):
        nonlocal count
        if count >= limit:
            return
        if i == len(rows):
            count += 1
            return
        for line in row_opts[i]:
            chosen.append(line)
            # prune on column prefixes
            if all(any(opt[: i + 1] == tuple(r[j] for r in chosen) for opt in col_opts[j]) for j in range(width)):
                rec(i + 1, chosen)
            chosen.pop()

    rec(0, [])
    return count


def brute_solutions(init, constraints, cap: int = 10**6) -> list[tuple[int, ...]]:
    """Every assignment in the product of ``init`` satisfying all of
    ``constraints`` (each with ``scope`` and ``satisfied``)."""
    if math.prod(s.size for s in init) > cap:
        raise ValueError("search space above cap")
    out = []
    for vals in itertools.product(*(list(s) for s in init)):
        if all(f.satisfied([vals[x] for x in f.scope]) for f in constraints):
            out.append(vals)
    return out
