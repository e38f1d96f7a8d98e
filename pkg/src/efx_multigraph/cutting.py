"""Two-bundle cuts of a shared edge set, both halves EFX-feasible for the cutter.

The cutter's greedy: walk the pair's items in descending cutter-value (ties by
lowest edge id) and drop each onto the currently lighter bundle (ties toward c1).
The running lighter-bundle invariant makes both halves EFX-feasible for the cutter.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .model import Instance, edge_set


@dataclass(frozen=True)
class CutConfig:
    """An ordered pair of bundles partitioning E(cutter, other).

    c1 is the bundle that received the first (most valuable) item.
    """

    cutter: int
    other: int
    c1: frozenset[int]
    c2: frozenset[int]

    def bundles(self) -> tuple[frozenset[int], frozenset[int]]:
        return (self.c1, self.c2)


@lru_cache(maxsize=16384)
def cut(inst: Instance, cutter: int, other: int) -> CutConfig:
    """Deterministic balanced split of E(cutter, other) under the cutter's values."""
    if cutter == other:
        raise ValueError(f"cut needs two distinct agents, got ({cutter}, {other})")
    items = sorted(edge_set(inst, cutter, other),
                   key=lambda e: (-inst.edges[e].value_for(cutter), e))
    c1: set[int] = set()
    c2: set[int] = set()
    v1 = Fraction(0)
    v2 = Fraction(0)
    for e in items:
        w = inst.edges[e].value_for(cutter)
        if v1 <= v2:
            c1.add(e)
            v1 += w
        else:
            c2.add(e)
            v2 += w
    return CutConfig(cutter, other, frozenset(c1), frozenset(c2))


def preferred_bundle(inst: Instance, agent: int, cfg: CutConfig) -> frozenset[int]:
    """The cut bundle this agent weakly prefers; exact ties go to c1."""
    v1 = sum((inst.edges[e].value_for(agent) for e in cfg.c1), Fraction(0))
    v2 = sum((inst.edges[e].value_for(agent) for e in cfg.c2), Fraction(0))
    return cfg.c1 if v1 >= v2 else cfg.c2
