"""State-dependent availability sets driving the bipartite pipeline.

For an ordered adjacent pair (i, j) and a partial allocation X, the available set
A[i,j](X) is what i could still claim from E(i,j):

  * nothing of E(i,j) allocated        -> i's preferred bundle of the pair's cut
                                          (the cut is always made by the T-side agent)
  * only j holds items of E(i,j)       -> the unallocated remainder E(i,j) \\ X_j
  * i already holds items, or a third
    agent holds items of E(i,j)        -> empty

From these: A_i = union over j, B_i = the list of per-pair bundles, U_i = all
unallocated incident edges, and the safe set S_i = non-envied agents k that i would
still not envy after k absorbed all of A_i.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .cutting import cut, preferred_bundle
from .fairness import bundle_value, envied_set
from .model import Allocation, Instance, edge_set

Bipartition = tuple[tuple[int, ...], tuple[int, ...]]


def t_side_of(pair: tuple[int, int], parts: Bipartition) -> int:
    """The T-side agent of an adjacent pair under the given bipartition."""
    t = set(parts[1])
    a, b = pair
    if (a in t) == (b in t):
        raise ValueError(f"agents {a} and {b} lie on the same bipartition side")
    return a if a in t else b


def available(inst: Instance, alloc: Allocation, i: int, j: int, parts: Bipartition) -> frozenset[int]:
    """A[i,j](X): edges of E(i,j) still claimable by i."""
    pair_edges = edge_set(inst, i, j)
    if not pair_edges:
        return frozenset()
    held_i = pair_edges & alloc.bundles[i]
    held_j = pair_edges & alloc.bundles[j]
    held_other = (pair_edges & alloc.assigned()) - held_i - held_j
    if held_other:
        return frozenset()
    if not held_i and not held_j:
        cutter = t_side_of((i, j), parts)
        other = j if cutter == i else i
        return preferred_bundle(inst, i, cut(inst, cutter, other))
    if not held_i and held_j:
        return pair_edges - held_j
    return frozenset()


def available_set(inst: Instance, alloc: Allocation, i: int, parts: Bipartition) -> frozenset[int]:
    """A_i(X): the union of A[i,j](X) over all other agents j."""
    out: set[int] = set()
    for j in range(inst.n):
        if j != i:
            out |= available(inst, alloc, i, j, parts)
    return frozenset(out)


def available_bundles(inst: Instance, alloc: Allocation, i: int, parts: Bipartition) -> list[frozenset[int]]:
    """B_i(X): one available bundle per adjacent j (empty ones included)."""
    return [available(inst, alloc, i, j, parts) for j in range(inst.n) if j != i]


def unallocated_incident(inst: Instance, alloc: Allocation, i: int) -> frozenset[int]:
    """U_i(X): unallocated edges incident to i."""
    return inst.incident(i) - alloc.assigned()


def safe_set(inst: Instance, alloc: Allocation, i: int, parts: Bipartition) -> set[int]:
    """S_i(X) for an envied agent i: non-envied agents k with
    v_i(X_i) >= v_i(X_k union A_i(X))."""
    envied = envied_set(inst, alloc)
    if i not in envied:
        raise ValueError(f"agent {i} is not envied; its safe set is undefined")
    avail = available_set(inst, alloc, i, parts)
    own = bundle_value(inst, i, alloc.bundles[i])
    out: set[int] = set()
    for k in range(inst.n):
        if k == i or k in envied:
            continue
        if own >= bundle_value(inst, i, alloc.bundles[k] | avail):
            out.add(k)
    return out


@dataclass(frozen=True)
class DerivedState:
    """Snapshot of every availability construct for one allocation."""

    pair_available: dict[tuple[int, int], frozenset[int]] = field(default_factory=dict)
    agent_available: dict[int, frozenset[int]] = field(default_factory=dict)
    unallocated: dict[int, frozenset[int]] = field(default_factory=dict)
    safe: dict[int, set[int]] = field(default_factory=dict)


def derived_state(inst: Instance, alloc: Allocation, parts: Bipartition) -> DerivedState:
    pair_avail: dict[tuple[int, int], frozenset[int]] = {}
    for a, b in inst.pairs():
        pair_avail[(a, b)] = available(inst, alloc, a, b, parts)
        pair_avail[(b, a)] = available(inst, alloc, b, a, parts)
    agent_avail = {i: available_set(inst, alloc, i, parts) for i in range(inst.n)}
    unalloc = {i: unallocated_incident(inst, alloc, i) for i in range(inst.n)}
    safe = {i: safe_set(inst, alloc, i, parts) for i in envied_set(inst, alloc)}
    return DerivedState(pair_avail, agent_avail, unalloc, safe)
