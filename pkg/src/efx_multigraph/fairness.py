"""Envy, strong envy, EFX verification and related structural checks.

Everything here is a pure function of (instance, allocation); comparisons are exact.
A bundle ``B`` seen through agent ``i``'s eyes is worth the sum of ``i``'s endpoint
values over the edges of ``B`` incident to ``i``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

from .model import Allocation, Instance, is_orientation, skeleton_adjacency

ONE = Fraction(1)


class Witness(NamedTuple):
    envier: int
    envied: int
    removed_edge: int | None
    lhs: Fraction
    rhs: Fraction

    def to_json(self) -> dict:
        return {
            "envier": self.envier,
            "envied": self.envied,
            "removed_edge": self.removed_edge,
            "lhs": str(self.lhs),
            "rhs": str(self.rhs),
        }


@dataclass(frozen=True)
class Verdict:
    """Outcome of a fairness check: pass, or a list of exact violation witnesses."""

    passed: bool
    witnesses: tuple[Witness, ...] = ()
    alpha: Fraction = ONE

    def to_json(self) -> dict:
        return {
            "pass": self.passed,
            "alpha": str(self.alpha),
            "witnesses": [w.to_json() for w in self.witnesses],
        }


def bundle_value(inst: Instance, agent: int, bundle: Iterable[int]) -> Fraction:
    """Additive value of a set of edge ids for one agent (0 for non-incident edges)."""
    total = Fraction(0)
    for e in bundle:
        if not (0 <= e < inst.m):
            raise ValueError(f"invalid edge id {e}")
        total += inst.edges[e].value_for(agent)
    return total


def envies(inst: Instance, alloc: Allocation, i: int, j: int) -> bool:
    """Strict envy: i values j's bundle above her own."""
    return bundle_value(inst, i, alloc.bundles[j]) > bundle_value(inst, i, alloc.bundles[i])


def _worst_removal(inst: Instance, viewer: int, bundle: frozenset[int]) -> tuple[int, Fraction]:
    """The edge whose removal hurts the viewer least (argmin value, tie -> lowest id)."""
    best_edge = -1
    best_val: Fraction | None = None
    for e in sorted(bundle):
        val = inst.edges[e].value_for(viewer)
        if best_val is None or val < best_val:
            best_val = val
            best_edge = e
    assert best_val is not None
    return best_edge, best_val


def strongly_envies(inst: Instance, alloc: Allocation, i: int, j: int) -> Witness | None:
    """Witness that i strongly envies j, or None.

    The witness removes the item of j's bundle that i values least, which maximizes
    the surviving value; ties broken by lowest edge id.
    """
    target = alloc.bundles[j]
    if not target:
        return None
    own = bundle_value(inst, i, alloc.bundles[i])
    other = bundle_value(inst, i, target)
    if other <= own:
        return None
    g, g_val = _worst_removal(inst, i, target)
    surviving = other - g_val
    if own < surviving:
        return Witness(i, j, g, own, surviving)
    return None


def enviers_of(inst: Instance, alloc: Allocation, i: int) -> list[int]:
    return [j for j in range(inst.n) if j != i and envies(inst, alloc, j, i)]


def envied_set(inst: Instance, alloc: Allocation) -> set[int]:
    """Agents whose bundle some other agent strictly envies."""
    out: set[int] = set()
    values = [bundle_value(inst, a, alloc.bundles[a]) for a in range(inst.n)]
    for j in range(inst.n):
        for i in range(inst.n):
            if i != j and bundle_value(inst, i, alloc.bundles[j]) > values[i]:
                out.add(j)
                break
    return out


def _check_pairs(inst: Instance, alloc: Allocation) -> list[tuple[int, int]]:
    """Ordered pairs worth checking: all of them, unless the allocation is an
    orientation, in which case skeleton-adjacent pairs suffice (an agent can only
    be hurt by a neighbor's bundle when every item sits at one of its endpoints)."""
    if is_orientation(inst, alloc):
        adj = skeleton_adjacency(inst)
        return [(i, j) for i in range(inst.n) for j in sorted(adj[i])]
    return [(i, j) for i in range(inst.n) for j in range(inst.n) if i != j]


def check_efx(inst: Instance, alloc: Allocation, alpha: Fraction = ONE) -> Verdict:
    """Verify `v_i(X_i) >= alpha * v_i(X_j minus g)` for all i, j and g in X_j.

    Returns the max-violation witness per failing ordered pair, in ascending
    (envier, envied) order, so failures are reproducible.
    """
    if not (0 < alpha <= 1):
        raise ValueError(f"alpha must be in (0, 1], got {alpha}")
    witnesses: list[Witness] = []
    own = [bundle_value(inst, a, alloc.bundles[a]) for a in range(inst.n)]
    for i, j in _check_pairs(inst, alloc):
        target = alloc.bundles[j]
        if not target:
            continue
        other = bundle_value(inst, i, target)
        if other == 0:
            continue
        g, g_val = _worst_removal(inst, i, target)
        bar = alpha * (other - g_val)
        if own[i] < bar:
            witnesses.append(Witness(i, j, g, own[i], bar))
    return Verdict(not witnesses, tuple(witnesses), alpha)


def achieved_alpha(inst: Instance, alloc: Allocation, agent: int) -> Fraction:
    """Largest alpha in (0, 1] this agent satisfies (1 when unconstrained)."""
    own = bundle_value(inst, agent, alloc.bundles[agent])
    best = ONE
    for j in range(inst.n):
        if j == agent or not alloc.bundles[j]:
            continue
        other = bundle_value(inst, agent, alloc.bundles[j])
        if other == 0:
            continue
        _, g_val = _worst_removal(inst, agent, alloc.bundles[j])
        surviving = other - g_val
        if surviving > own:
            best = min(best, own / surviving)
    return best


def is_efx_feasible(inst: Instance, agent: int, partition: Sequence[Iterable[int]], k: int) -> bool:
    """Is bundle ``partition[k]`` worth at least every rival bundle minus its best item?

    Literal evaluation of EFX-feasibility for one agent over a bundle partition.
    """
    bundles = [frozenset(b) for b in partition]
    seen: set[int] = set()
    for b in bundles:
        if b & seen:
            raise ValueError("partition bundles must be disjoint")
        seen |= b
    mine = bundle_value(inst, agent, bundles[k])
    for b in bundles:
        for g in b:
            if mine < bundle_value(inst, agent, b) - inst.edges[g].value_for(agent):
                return False
    return True


def check_envied_singleton(inst: Instance, alloc: Allocation) -> Verdict:
    """On a partial EFX orientation, every envied agent must have exactly one envier
    j, and her whole bundle must come from the edges she shares with j."""
    if not is_orientation(inst, alloc):
        raise ValueError("input is not an orientation")
    if not check_efx(inst, alloc).passed:
        raise ValueError("input orientation is not EFX")
    witnesses: list[Witness] = []
    for i in sorted(envied_set(inst, alloc)):
        js = enviers_of(inst, alloc, i)
        own_i = bundle_value(inst, i, alloc.bundles[i])
        if len(js) != 1:
            for j in js[1:]:
                witnesses.append(Witness(j, i, None, bundle_value(inst, j, alloc.bundles[j]),
                                         bundle_value(inst, j, alloc.bundles[i])))
            continue
        j = js[0]
        stray = [e for e in sorted(alloc.bundles[i]) if {inst.edges[e].u, inst.edges[e].v} != {i, j}]
        for e in stray:
            witnesses.append(Witness(j, i, e, own_i, own_i))
    return Verdict(not witnesses, tuple(witnesses))
