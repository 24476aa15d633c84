"""Finite-domain constraint propagation engine with configurable
scheduling, plus search and a benchmark harness."""

from .domain import Domain
from .engine import Engine, EngineConfig, POLICIES, Space
from .intset import IntSet
from .model import Model
from .search import Brancher, SearchResult, search, solve

__all__ = [
    "Brancher",
    "Domain",
    "Engine",
    "EngineConfig",
    "IntSet",
    "Model",
    "POLICIES",
    "SearchResult",
    "Space",
    "search",
    "solve",
]
