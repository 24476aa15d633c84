"""Command line: ``fdprop bench | check | trace``."""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .bench import checks
from .bench.emit import emit
from .bench.models import TINY, build_model, model_names
from .bench.sweep import grid, run
from .engine import POLICIES, Engine, EngineConfig, Space
from .errors import ConfigError, ModelError
from .events import describe

EVENT_CHOICES = {"none": "none", "fix": "fix", "fix-bc": "fix_bc", "fix-lbc-ubc": "fix_lbc_ubc", "fix-bc-dmc": "fix_bc_dmc"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _csv_choice(choices: Sequence[str]):
    def parse(text: str) -> list[str]:
        vals = [v.strip() for v in text.split(",") if v.strip()]
        for v in vals:
            if v not in choices:
                raise argparse.ArgumentTypeError(f"invalid choice {v!r} (choose from {', '.join(choices)})")
        return vals

    return parse


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fdprop", description="Finite-domain propagation engine experiments.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    b = sub.add_parser("bench", help="run models over a grid of engine configurations")
    b.add_argument("--model", action="append", required=True, help="model name (repeatable)")
    b.add_argument("--size", type=int, help="size parameter")
    b.add_argument("--policy", type=_csv_choice(list(POLICIES)), help="named wake-up policies; overrides the three options below")
    b.add_argument("--fixpoint", type=_csv_choice(["none", "static", "dynamic"]), default=["dynamic"])
    b.add_argument("--events", type=_csv_choice(list(EVENT_CHOICES)), default=["fix-bc-dmc"])
    b.add_argument("--dyn-events", type=_csv_choice(["static", "monotonic", "full"]), default=["static"])
    b.add_argument("--queue", type=_csv_choice(["fifo", "lifo"]), default=["fifo"])
    b.add_argument("--priorities", type=_csv_choice(["one", "small", "medium", "full"]), default=["full"])
    b.add_argument("--inverse-priorities", action="store_true")
    b.add_argument("--complete-fixpoints", action="store_true")
    b.add_argument("--dynamic-priorities", action="store_true")
    b.add_argument("--combine", type=_csv_choice(["single", "immediate", "multiple", "staged"]), default=["single"])
    b.add_argument("--format", choices=["table", "csv"], default="table")
    b.add_argument("--baseline", help="cell label to report relative step changes against")
    b.add_argument("--node-limit", type=int, help="stop after this many branching nodes")
    b.add_argument("--audit", action="store_true", help="check the scheduling invariant at every loop head")

    c = sub.add_parser("check", help="run the oracle and invariant self-checks")
    c.add_argument("--quick", action="store_true", help="skip the slower sweeps")

    t = sub.add_parser("trace", help="print queue and domain after every propagator run")
    t.add_argument("--model", required=True, choices=sorted(TINY) + ["queens", "queens-a", "minsort", "partition"])
    t.add_argument("--size", type=int)
    t.add_argument("--policy", choices=list(POLICIES), default="input")
    t.add_argument("--priorities", choices=["one", "small", "medium", "full"], default="one")
    t.add_argument("--queue", choices=["fifo", "lifo"], default="fifo")
    t.add_argument("--limit", type=int, default=200, help="maximum number of steps printed")
    return p


def _configs(args) -> list[EngineConfig]:
    axes = dict(
        queue=args.queue,
        priorities=args.priorities,
        combination=args.combine,
        inverse_priorities=[args.inverse_priorities],
        complete_fixpoints=[args.complete_fixpoints],
        dynamic_priorities=[args.dynamic_priorities],
    )
    if args.policy:
        axes["policy"] = args.policy
    else:
        axes.update(fixpoint=args.fixpoint, events=[EVENT_CHOICES[e] for e in args.events], dyn_events=args.dyn_events)
    cfgs = grid(**axes)
    if not cfgs:
        raise ConfigError("no valid configuration in the requested grid")
    return cfgs


def cmd_bench(args, out) -> int:
    cfgs = _configs(args)
    records = []
    for name in args.model:
        for cfg in cfgs:
            records.append(run(build_model(name, args.size), cfg, audit=args.audit, node_limit=args.node_limit))
    if args.baseline is not None and not any(r.cell == args.baseline for r in records):
        raise UsageError(f"baseline cell {args.baseline!r} is not in the grid; cells: {sorted({r.cell for r in records})}")
    out.write(emit(records, args.format, args.baseline))
    return 0


def cmd_check(args, out) -> int:
    results: list[tuple[str, bool, str]] = []

    dom, steps = checks.incremental_trace("input")
    results.append(("incremental trace reaches ([0,12],[0,6],[0,4])", dom == [(0, 12), (0, 6), (0, 4)], f"{dom}, {steps} steps"))
    dom, steps = checks.incremental_trace("dfix")
    results.append(("incremental trace with fixpoint reasoning takes 6 steps", steps == 6, f"{steps} steps"))

    tr = checks.nonidempotent_trace()
    want = [([(0, 3), (0, 4)], "UNKNOWN"), ([(0, 2), (0, 4)], "UNKNOWN"), ([(0, 2), (0, 3)], "AT_FIXPOINT")]
    results.append(("non-idempotent linear trace", [(b, s.name) for b, s in tr] == want, str([(b, s.name) for b, s in tr])))

    final, counts = checks.repeated_fixpoints_trace(False)
    ok = [str(s) for s in final] == ["{6}", "{3}", "{2}", "{0,1}", "{0,1}"] and counts.get("guarded_leq") == 3 and counts.get("alldiff_domain") == 2
    results.append(("repeated fixpoints counts", ok, str(counts)))
    _, counts = checks.repeated_fixpoints_trace(True)
    results.append(("inverted priorities repeat work", counts["guarded_leq"] >= 10 and counts["alldiff_domain"] >= 10, str(counts)))

    bad = checks.event_law_violations(2000 if args.quick else 10_000)
    results.append(("event composition law", not bad, f"{len(bad)} violations"))

    mism = checks.alldiff_oracle_mismatches(3 if args.quick else 4)
    results.append(("alldifferent vs enumeration oracles", not any(mism.values()), str({k: len(v) for k, v in mism.items()})))

    for name, ok, detail in checks.expected_vs_oracle():
        results.append((f"oracle: {name}", ok, detail))

    names = ["queens", "magic-sequence", "golomb", "donald-v", "picture-small"] if args.quick else None
    for name, ok, detail in checks.registry_results(names):
        results.append((f"solve: {name}", ok, detail))

    cells = checks.audit_cells()
    for name in (["queens", "minsort"] if args.quick else list(checks.AUDIT_SIZES)):
        probs = checks.audit_model(name, checks.AUDIT_SIZES.get(name), cells, node_limit=checks.AUDIT_NODES)
        results.append((f"audit: {name}", not probs, f"{len(probs)} violations"))

    failed = 0
    for name, ok, detail in results:
        failed += not ok
        if len(detail) > 80:
            detail = detail[:77] + "..."
        out.write(f"{'PASS' if ok else 'FAIL'}  {name}  ({detail})\n")
    out.write(f"{len(results) - failed}/{len(results)} checks passed\n")
    return 1 if failed else 0


def cmd_trace(args, out) -> int:
    spec = build_model(args.model, args.size)
    m = spec.model
    names = m.names

    def hook(ev):
        if ev["step"] > args.limit:
            return
        d = ev["domain"]
        stage = f" stage {ev['stage']}" if ev["stage"] else ""
        evs = ", ".join(sorted(describe(ev["events"], names))) or "-"
        queue = " | ".join(" ".join(str(p) for p in lvl) for lvl in ev["queue"])
        dom = " ".join(f"{n}={s!r}" for n, s in zip(names, d.sets))
        out.write(f"{ev['step']:4d} p{ev['pid']} {ev['prop']!r}{stage} -> {ev['status'].name}\n")
        out.write(f"     events: {evs}\n     queue:  [{queue}]\n     domain: {dom}\n")

    cfg = EngineConfig.policy(args.policy, priorities=args.priorities, queue=args.queue)
    e = Engine(cfg, trace=hook)
    space = Space(m.domain())
    pids = e.post(space, m.propagators())
    out.write("propagators: " + ", ".join(f"p{p}={space.props[p]!r}" for p in pids) + "\n")
    ok = e.isolv(space, pids)
    if ok and spec.trigger:
        out.write("trigger: " + ", ".join(repr(f) for f in spec.trigger) + "\n")
        ok = e.isolv(space, spec.trigger)
    out.write(f"{'fixpoint' if ok else 'failure'} after {e.stats.steps} steps\n")
    return 0


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError(parser.format_usage().strip())
        if args.command == "bench":
            return cmd_bench(args, out)
        if args.command == "check":
            return cmd_check(args, out)
        return cmd_trace(args, out)
    except (UsageError, ModelError, ConfigError) as exc:
        print(exc.args[0] if exc.args else exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
