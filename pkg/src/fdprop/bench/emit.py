"""Rendering run records as a table, CSV, or relative changes."""

from __future__ import annotations

import csv
import io
import math
from typing import Sequence

from .sweep import RunRecord

COLUMNS = ("model", "cell", "steps", "failures", "solutions", "time_ms")


def _row(r: RunRecord) -> list:
    return [r.model, r.cell, r.steps, r.failures, r.solutions, f"{r.time_ms:.1f}"]


def to_csv(records: Sequence[RunRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in records:
        w.writerow(_row(r))
    return buf.getvalue()


def to_table(records: Sequence[RunRecord]) -> str:
    rows = [list(COLUMNS)] + [[str(v) for v in _row(r)] for r in records]
    widths = [max(len(row[i]) for row in rows) for i in range(len(COLUMNS))]
    lines = []
    for k, row in enumerate(rows):
        lines.append("  ".join(v.ljust(w) if i < 2 else v.rjust(w) for i, (v, w) in enumerate(zip(row, widths))))
        if k == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def percent(ratio: float) -> str:
    return f"{(ratio - 1) * 100:+.1f}%"


def relative(records: Sequence[RunRecord], baseline: str, metric: str = "steps") -> str:
    """Change of ``metric`` per (model, cell) against the ``baseline`` cell
    of the same model, with a geometric-mean row labelled ``average``."""
    base = {r.model: getattr(r, metric) for r in records if r.cell == baseline}
    cells: list[str] = []
    ratios: dict[str, list[float]] = {}
    lines = [f"{'model':<20} {'cell':<50} {metric:>10} {'change':>9}"]
    for r in records:
        if r.cell == baseline or r.model not in base:
            continue
        b = base[r.model]
        v = getattr(r, metric)
        # a zero count on both sides is no change
        ratio = 1.0 if b == v else (v / b if b else math.inf)
        if r.cell not in ratios:
            cells.append(r.cell)
            ratios[r.cell] = []
        ratios[r.cell].append(ratio)
        lines.append(f"{r.model:<20} {r.cell:<50} {v:>10} {percent(ratio):>9}")
    for c in cells:
        finite = [x for x in ratios[c] if 0 < x < math.inf]
        if finite:
            g = math.exp(sum(math.log(x) for x in finite) / len(finite))
            lines.append(f"{'average':<20} {c:<50} {'':>10} {percent(g):>9}")
    return "\n".join(lines) + "\n"


def emit(records: Sequence[RunRecord], fmt: str = "table", baseline: str | None = None) -> str:
    if baseline is not None:
        return relative(records, baseline)
    if fmt == "csv":
        return to_csv(records)
    if fmt == "table":
        return to_table(records)
    raise ValueError(f"unknown format {fmt!r}")
