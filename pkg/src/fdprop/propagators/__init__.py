from .alldiff import AlldiffBounds, AlldiffDomain, AlldiffNaive, hall_bounds, regin_supports
from .arith import Abs, Even, GuardedLeq, LeqOffset, Member, MinProp, Mult, NeqOffset
from .base import Priority, Propagator, PropStatus, apply
from .counting import BoolSum, Exactly
from .generic import DEFAULT_CAP, DomGeneric, ZBoundsGeneric, dom_generic, zbnd_wrap
from .linear import LinearBounds, LinearDomain, Plus
from .sequence import DFA, Lex, Regular
from .staged import Immediate, StagedAlldiff, StagedLinear

__all__ = [
    "Abs",
    "AlldiffBounds",
    "AlldiffDomain",
    "AlldiffNaive",
    "BoolSum",
    "DEFAULT_CAP",
    "DFA",
    "DomGeneric",
    "Even",
    "Exactly",
    "GuardedLeq",
    "Immediate",
    "LeqOffset",
    "Lex",
    "LinearBounds",
    "LinearDomain",
    "Member",
    "MinProp",
    "Mult",
    "NeqOffset",
    "Plus",
    "Priority",
    "PropStatus",
    "Propagator",
    "Regular",
    "StagedAlldiff",
    "StagedLinear",
    "ZBoundsGeneric",
    "apply",
    "dom_generic",
    "hall_bounds",
    "regin_supports",
    "zbnd_wrap",
]
