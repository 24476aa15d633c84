"""Running models under engine configurations."""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from ..engine import Engine, EngineConfig, POLICIES, Space
from ..search import SearchResult, search
from .models import ModelSpec, build_model

__all__ = ["RunRecord", "run", "sweep", "grid"]


@dataclass
class RunRecord:
    model: str
    cell: str
    steps: int
    failures: int
    solutions: int
    time_ms: float
    enqueues: int = 0
    nodes: int = 0
    outcome: str = ""
    complete: bool = True
    found: list = field(default_factory=list, repr=False)
    objective: int | None = None


def run(
    spec: ModelSpec,
    config: EngineConfig | None = None,
    audit: bool = False,
    node_limit: int | None = None,
    check: bool = False,
    cell: str | None = None,
) -> RunRecord:
    config = config or EngineConfig()
    m = spec.model
    engine = Engine(config, audit=audit)
    props = m.propagators(config.combination)
    t0 = time.perf_counter()
    space = Space(m.domain())
    new = engine.post(space, props)
    if spec.trigger:
        # the trigger is only meaningful on top of the root fixpoint
        if not engine.isolv(space, new):
            res = SearchResult("unsat", stats=engine.stats.snapshot())
        else:
            new = list(spec.trigger)
            res = search(engine, space, new, m.brancher, m.mode, m.objective, node_limit, check)
    else:
        res = search(engine, space, new, m.brancher, m.mode, m.objective, node_limit, check)
    ms = (time.perf_counter() - t0) * 1000
    st = engine.stats
    return RunRecord(
        model=spec.name,
        cell=cell or config.label(),
        steps=st.steps,
        failures=st.failures,
        solutions=st.solutions,
        time_ms=ms,
        enqueues=st.enqueues,
        nodes=st.nodes,
        outcome=res.outcome,
        complete=res.complete,
        found=[m.view(s) for s in res.solutions],
        objective=res.objective,
    )


def grid(**axes: Sequence) -> list[EngineConfig]:
    """Cartesian product of config fields; ``policy`` selects a named preset.

    Cells that violate a config constraint are skipped.
    """
    from ..errors import ConfigError

    keys = list(axes)
    out = []
    for combo in itertools.product(*(axes[k] for k in keys)):
        kw = dict(zip(keys, combo))
        policy = kw.pop("policy", None)
        try:
            out.append(EngineConfig.policy(policy, **kw) if policy else EngineConfig(**kw))
        except ConfigError:
            continue
    return out


def sweep(
    models: Iterable[tuple[str, int | None]],
    configs: Sequence[EngineConfig],
    **kw,
) -> list[RunRecord]:
    records = []
    for name, n in models:
        for cfg in configs:
            records.append(run(build_model(name, n), cfg, **kw))
    return records


POLICY_NAMES = tuple(POLICIES)
