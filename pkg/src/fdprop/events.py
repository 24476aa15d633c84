"""Event classification and per-variable dependency lists.

An event set is represented as a plain ``dict`` from variable index to a
bitmask over ``FIX | LBC | UBC | DMC``. ``BC`` is the derived mask
``LBC | UBC``.
"""

from __future__ import annotations

from typing import Iterable, Mapping

__all__ = [
    "FIX",
    "LBC",
    "UBC",
    "BC",
    "DMC",
    "ALL",
    "KINDS",
    "EVENT_LEVELS",
    "event_mask",
    "classify",
    "merge",
    "widen",
    "describe",
    "parse_events",
    "DependencyTable",
]

FIX = 1
LBC = 2
UBC = 4
DMC = 8
BC = LBC | UBC
ALL = FIX | LBC | UBC | DMC

KINDS = (FIX, LBC, UBC, DMC)
_NAMES = {FIX: "fix", LBC: "lbc", UBC: "ubc", DMC: "dmc"}

EVENT_LEVELS = ("none", "fix", "fix_bc", "fix_lbc_ubc", "fix_bc_dmc")


def event_mask(old_min, old_max, old_size, new_min, new_max, new_size) -> int:
    """Events raised by a change from an old set to a subset of it."""
    if new_size == old_size:
        return 0
    mask = DMC
    if new_size == 0:
        return mask
    if new_min > old_min:
        mask |= LBC
    if new_max < old_max:
        mask |= UBC
    if new_size == 1:
        mask |= FIX
    return mask


def classify(record) -> dict[int, int]:
    """Event set of a single change record produced by ``Domain.tighten``.

    ``record`` may be ``None`` (no change), which yields the empty set.
    """
    if record is None:
        return {}
    mask = event_mask(
        record.old_min, record.old_max, record.old_size,
        record.new_min, record.new_max, record.new_size,
    )
    return {record.var: mask} if mask else {}


def merge(e1: Mapping[int, int], e2: Mapping[int, int]) -> dict[int, int]:
    out = dict(e1)
    for x, m in e2.items():
        out[x] = out.get(x, 0) | m
    return out


def widen(mask: int, level: str) -> int:
    """Map a requested subscription mask onto the events a level distinguishes.

    Any change on a variable always raises ``DMC``, so ``DMC`` is the
    fallback for every request a level cannot express.
    """
    if not mask:
        return 0
    if level == "fix_bc_dmc" or level == "fix_bc":
        if mask & BC:
            mask |= BC
        return mask
    if level == "fix_lbc_ubc":
        return mask
    if level == "fix":
        return mask if mask == FIX else (mask & FIX) | DMC
    if level == "none":
        return DMC
    raise ValueError(f"unknown event level {level!r}")


def describe(events: Mapping[int, int], names: Iterable[str] | None = None) -> set[str]:
    """Render an event set as strings such as ``"ubc(x1)"``."""
    names = list(names) if names is not None else None
    out = set()
    for x, m in events.items():
        label = names[x] if names is not None else f"x{x}"
        for k in KINDS:
            if m & k:
                out.add(f"{_NAMES[k]}({label})")
    return out


def parse_events(text: Iterable[str], names: Iterable[str]) -> dict[int, int]:
    """Inverse of :func:`describe`; accepts ``bc(x)`` as ``lbc|ubc``."""
    index = {n: i for i, n in enumerate(names)}
    kinds = {v: k for k, v in _NAMES.items()}
    kinds["bc"] = BC
    out: dict[int, int] = {}
    for item in text:
        kind, _, rest = item.partition("(")
        x = index[rest.rstrip(")")]
        out[x] = out.get(x, 0) | kinds[kind]
    return out


class DependencyTable:
    """Subscriptions of propagators to (variable, event kind) pairs.

    Each (variable, kind) slot is a dict used as an insertion-ordered set of
    propagator ids, which gives O(1) subscribe/unsubscribe and a
    deterministic wake-up order. ``evset[pid]`` mirrors what a propagator is
    subscribed to, so resubscription can diff against it.
    """

    __slots__ = ("slots", "evset")

    def __init__(self, nvars: int = 0):
        self.slots: list[tuple[dict, dict, dict, dict]] = [({}, {}, {}, {}) for _ in range(nvars)]
        self.evset: dict[int, dict[int, int]] = {}

    def copy(self) -> DependencyTable:
        t = DependencyTable.__new__(DependencyTable)
        t.slots = [(a.copy(), b.copy(), c.copy(), d.copy()) for a, b, c, d in self.slots]
        t.evset = {p: es.copy() for p, es in self.evset.items()}
        return t

    def add_var(self) -> None:
        self.slots.append(({}, {}, {}, {}))

    def _set(self, pid: int, x: int, old: int, new: int) -> None:
        slot = self.slots[x]
        for bit, kind in enumerate(KINDS):
            if old & kind and not new & kind:
                del slot[bit][pid]
            elif new & kind and not old & kind:
                slot[bit][pid] = None

    def subscribe(self, pid: int, events: Mapping[int, int]) -> None:
        self.resubscribe(pid, events)

    def resubscribe(self, pid: int, new: Mapping[int, int]) -> None:
        """Make ``pid``'s subscriptions exactly ``new``."""
        old = self.evset.get(pid, {})
        for x, m in old.items():
            n = new.get(x, 0)
            if n != m:
                self._set(pid, x, m, n)
        for x, n in new.items():
            if x not in old and n:
                self._set(pid, x, 0, n)
        self.evset[pid] = {x: m for x, m in new.items() if m}

    def unsubscribe(self, pid: int) -> None:
        self.resubscribe(pid, {})
        del self.evset[pid]

    def subscriptions(self, pid: int) -> dict[int, int]:
        return self.evset.get(pid, {})

    def dependents(self, batch: Mapping[int, int]) -> dict[int, int]:
        """Propagators subscribed to an event in ``batch``.

        Returns an ordered map from propagator id to the union of the raw
        batch masks on the variables through which it matched.
        """
        out: dict[int, int] = {}
        slots = self.slots
        for x, m in batch.items():
            slot = slots[x]
            for bit in range(4):
                if m & (1 << bit):
                    for pid in slot[bit]:
                        out[pid] = out.get(pid, 0) | m
        return out
