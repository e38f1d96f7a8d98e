"""The three-stage solver for bipartite multi-graphs, plus completion variants.

Stage 1 (greedy orientation) lets every agent, S side first, pick the available
bundle it values most.  Stage 2 keeps handing available edges to non-envied agents
until none has any left.  Stage 3 swaps cut bundles between an envied agent and an
unsafe envier until every envier is safe.  The partial orientation that survives
all three stages has a strong shape: the only unallocated edges sit between an
envied agent and a non-envied holder, and they can be given away wastefully
(complete_efx) or to the holder (half_efx_orientation) without creating strong envy.

Stage invariants are expressed as five property flags:

  P1  the allocation is an EFX orientation;
  P2  every touched pair is placed as whole bundles of the pair's T-side cut;
  P3  nobody values any of her available bundles above her own bundle;
  P4  non-envied agents have empty available sets;
  P5  every envier of an envied agent is in that agent's safe set.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .cutting import cut
from .derived import (
    Bipartition,
    available,
    available_bundles,
    available_set,
    safe_set,
    t_side_of,
    unallocated_incident,
)
from .fairness import bundle_value, check_efx, envied_set, enviers_of
from .model import (
    Allocation,
    Instance,
    StructureError,
    connected_components,
    edge_set,
    is_complete,
    is_orientation,
    two_coloring,
)


@dataclass(frozen=True)
class PropertyFlags:
    p1: bool
    p2: bool
    p3: bool
    p4: bool
    p5: bool

    def as_tuple(self) -> tuple[bool, bool, bool, bool, bool]:
        return (self.p1, self.p2, self.p3, self.p4, self.p5)

    def to_json(self) -> dict:
        return {"p1": self.p1, "p2": self.p2, "p3": self.p3, "p4": self.p4, "p5": self.p5}


@dataclass
class PipelineTrace:
    """Stage snapshots, their property flags, and the event log of a solver run."""

    snapshots: dict[str, Allocation] = field(default_factory=dict)
    flags: dict[str, PropertyFlags] = field(default_factory=dict)
    events: list[dict] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "snapshots": {name: [sorted(b) for b in alloc.bundles] for name, alloc in self.snapshots.items()},
            "flags": {name: fl.to_json() for name, fl in self.flags.items()},
            "events": self.events,
        }


def _freeze(cur: list[set[int]]) -> Allocation:
    return Allocation(tuple(frozenset(b) for b in cur))


def resolve_bipartition(inst: Instance, parts: Bipartition | None) -> Bipartition:
    if parts is None:
        parts = two_coloring(inst)
        if parts is None:
            raise StructureError("skeleton is not bipartite")
        return parts
    s_set, t_set = set(parts[0]), set(parts[1])
    if s_set & t_set or s_set | t_set != set(range(inst.n)):
        raise StructureError("bipartition must split the agents into two disjoint sides")
    for a, b in inst.pairs():
        if (a in s_set) == (b in s_set):
            raise StructureError(f"agents {a} and {b} share edges but sit on the same side")
    return (tuple(sorted(s_set)), tuple(sorted(t_set)))


def greedy_orientation(inst: Instance, parts: Bipartition | None = None,
                       events: list[dict] | None = None) -> Allocation:
    """Stage 1: picking sequence S ascending then T ascending; each agent takes the
    available bundle it values most (ties toward the lowest co-agent).  Agents whose
    best option is worthless take nothing."""
    parts = resolve_bipartition(inst, parts)
    cur: list[set[int]] = [set() for _ in range(inst.n)]
    order = list(parts[0]) + list(parts[1])
    for agent in order:
        frozen = _freeze(cur)
        best_k = -1
        best_bundle: frozenset[int] = frozenset()
        best_val = Fraction(0)
        for k in range(inst.n):
            if k == agent:
                continue
            bundle = available(inst, frozen, agent, k, parts)
            val = bundle_value(inst, agent, bundle)
            if val > best_val:
                best_k, best_bundle, best_val = k, bundle, val
        if best_val > 0:
            cur[agent] = set(best_bundle)
            if events is not None:
                events.append({"stage": "greedy", "agent": agent, "from": best_k,
                               "edges": sorted(best_bundle)})
    return _freeze(cur)


def _first_violation(inst: Instance, frozen: Allocation, parts: Bipartition,
                     envied: set[int]) -> tuple[int, int, frozenset[int]] | None:
    for i in range(inst.n):
        if i in envied:
            continue
        for j in range(inst.n):
            if j == i:
                continue
            a_ij = available(inst, frozen, i, j, parts)
            if a_ij:
                return i, j, a_ij
    return None


def _saturate_loop(inst: Instance, cur: list[set[int]], parts: Bipartition,
                   events: list[dict] | None, stage: str) -> None:
    """Drain every non-envied agent's available sets in place (the stage-2 cases)."""
    while True:
        frozen = _freeze(cur)
        envied = envied_set(inst, frozen)
        hit = _first_violation(inst, frozen, parts, envied)
        if hit is None:
            return
        i, j, a_ij = hit
        pair_edges = edge_set(inst, i, j)
        held_j = pair_edges & cur[j]
        if held_j:
            cur[i] |= a_ij
            case = 1
        else:
            cutter = t_side_of((i, j), parts)
            cfg = cut(inst, cutter, j if cutter == i else i)
            if a_ij not in (cfg.c1, cfg.c2):
                raise StructureError("available bundle does not match the pair's cut")
            if j not in envied:
                other_bundle = cfg.c2 if a_ij == cfg.c1 else cfg.c1
                cur[i] |= a_ij
                cur[j] |= other_bundle
                case = 2
            else:
                if cutter != i:
                    raise StructureError("envied agent found on the cutting side")
                cur[i] |= a_ij
                case = 3
        if events is not None:
            events.append({"stage": stage, "case": case, "i": i, "j": j,
                           "edges": sorted(a_ij)})


def saturate_non_envied(inst: Instance, alloc: Allocation, parts: Bipartition | None = None,
                        events: list[dict] | None = None) -> Allocation:
    """Stage 2: while some non-envied agent i has available edges (lowest i, then
    lowest co-agent j first), place A[i,j] by case:

      1. j already holds part of E(i,j)   -> i absorbs the remainder;
      2. E(i,j) untouched, j non-envied   -> i takes its preferred bundle of the
                                             T-side cut, j takes the other;
      3. E(i,j) untouched, j envied       -> i (necessarily the T side) takes its
                                             preferred bundle only.
    """
    parts = resolve_bipartition(inst, parts)
    entry_flags = check_properties(inst, alloc, parts)
    if not (entry_flags.p1 and entry_flags.p2 and entry_flags.p3):
        raise StructureError("input allocation does not satisfy the stage-1 invariants")
    cur = [set(b) for b in alloc.bundles]
    _saturate_loop(inst, cur, parts, events, "saturate")
    return _freeze(cur)


def enforce_safe_sets(inst: Instance, alloc: Allocation, parts: Bipartition | None = None,
                      events: list[dict] | None = None) -> Allocation:
    """Stage 3: while some envied agent (lowest id first) has an unsafe envier j,
    swap the two cut bundles of their shared pair and let the agent absorb its
    available set.

    A swap strictly raises the envier's own value, which can release *other*
    agents it envied; a released agent may leave an available set stranded, so the
    stage-2 saturation cases are re-run after every swap to restore the empty-
    available-set property before safety is rechecked.  The envied set shrinks
    monotonically (the swap never creates envy), so the loop terminates.
    """
    parts = resolve_bipartition(inst, parts)
    entry_flags = check_properties(inst, alloc, parts)
    if not (entry_flags.p1 and entry_flags.p2 and entry_flags.p3 and entry_flags.p4):
        raise StructureError("input allocation does not satisfy the stage-2 invariants")
    cur = [set(b) for b in alloc.bundles]
    while True:
        frozen = _freeze(cur)
        envied = sorted(envied_set(inst, frozen))
        target: tuple[int, int] | None = None
        for i in envied:
            unsafe = [j for j in enviers_of(inst, frozen, i)
                      if j not in safe_set(inst, frozen, i, parts)]
            if unsafe:
                target = (i, unsafe[0])
                break
        if target is None:
            break
        i, j = target
        cutter = t_side_of((i, j), parts)
        if cutter != j:
            raise StructureError("unsafe envier found on the non-cutting side")
        cfg = cut(inst, j, i)
        pair_edges = edge_set(inst, i, j)
        held_i = pair_edges & cur[i]
        held_j = pair_edges & cur[j]
        if {frozenset(held_i), frozenset(held_j)} != {cfg.c1, cfg.c2}:
            raise StructureError("swap pair is not split into the two cut bundles")
        cur[i] -= held_i
        cur[j] -= held_j
        cur[i] |= held_j
        cur[j] |= held_i
        absorbed = available_set(inst, _freeze(cur), i, parts)
        cur[i] |= absorbed
        after = envied_set(inst, _freeze(cur))
        if not after <= set(envied) - {i}:
            raise StructureError("safe-set swap failed to shrink the envied set")
        if events is not None:
            events.append({"stage": "safe-set", "i": i, "j": j,
                           "swapped_to_i": sorted(held_j), "swapped_to_j": sorted(held_i),
                           "absorbed": sorted(absorbed)})
        _saturate_loop(inst, cur, parts, events, "safe-set")
    return _freeze(cur)


def _leftover_pairs(inst: Instance, frozen: Allocation) -> list[tuple[tuple[int, int], frozenset[int]]]:
    assigned = frozen.assigned()
    out = []
    for a, b in inst.pairs():
        free = edge_set(inst, a, b) - assigned
        if free:
            out.append(((a, b), free))
    return out


def complete_efx(inst: Instance, parts: Bipartition | None = None) -> tuple[Allocation, PipelineTrace]:
    """Run the three stages, then hand each leftover set to the unique envier of its
    envied endpoint.  The result is a complete EFX allocation (possibly wasteful)."""
    parts = resolve_bipartition(inst, parts)
    trace = PipelineTrace()
    stage1 = greedy_orientation(inst, parts, trace.events)
    trace.snapshots["greedy"] = stage1
    trace.flags["greedy"] = check_properties(inst, stage1, parts)
    stage2 = saturate_non_envied(inst, stage1, parts, trace.events)
    trace.snapshots["saturate"] = stage2
    trace.flags["saturate"] = check_properties(inst, stage2, parts)
    stage3 = enforce_safe_sets(inst, stage2, parts, trace.events)
    trace.snapshots["safe"] = stage3
    trace.flags["safe"] = check_properties(inst, stage3, parts)

    cur = [set(b) for b in stage3.bundles]
    envied = envied_set(inst, stage3)
    for (a, b), free in _leftover_pairs(inst, stage3):
        envied_ends = [x for x in (a, b) if x in envied]
        if len(envied_ends) != 1:
            raise StructureError(f"leftover pair ({a}, {b}) lacks a unique envied endpoint")
        i = envied_ends[0]
        j = b if i == a else a
        ks = enviers_of(inst, stage3, i)
        if len(ks) != 1:
            raise StructureError(f"envied agent {i} has {len(ks)} enviers; expected one")
        k = ks[0]
        if k == j:
            raise StructureError("leftover holder cannot be the envier")
        cur[k] |= free
        trace.events.append({"stage": "completion", "pair": [a, b], "to": k,
                             "edges": sorted(free)})
    final = _freeze(cur)
    trace.snapshots["final"] = final
    trace.flags["final"] = check_properties(inst, final, parts)
    if not is_complete(inst, final):
        raise StructureError("completion left unallocated edges")
    verdict = check_efx(inst, final)
    if not verdict.passed:
        raise StructureError(f"completed allocation is not EFX: {verdict.witnesses[0]}")
    return final, trace


def half_efx_parts(inst: Instance) -> Bipartition:
    """Role assignment for the orientation variant: per component, the smaller color
    class plays S (tie: the class holding the component's lowest agent id)."""
    parts = two_coloring(inst)
    if parts is None:
        raise StructureError("skeleton is not bipartite")
    s_all, t_all = set(parts[0]), set(parts[1])
    s_out: set[int] = set()
    t_out: set[int] = set()
    for comp in connected_components(inst):
        side_a = [v for v in comp if v in s_all]
        side_b = [v for v in comp if v in t_all]
        if len(side_a) > len(side_b):
            side_a, side_b = side_b, side_a
        elif len(side_a) == len(side_b) and side_b and min(side_b) < min(side_a):
            side_a, side_b = side_b, side_a
        s_out.update(side_a)
        t_out.update(side_b)
    return (tuple(sorted(s_out)), tuple(sorted(t_out)))


def half_efx_orientation(inst: Instance, trace: PipelineTrace | None = None) -> Allocation:
    """Complete EFX-for-T, half-EFX-for-S orientation: run the stages with the
    smaller side as S, then give every leftover set to its non-envied holder."""
    parts = half_efx_parts(inst)
    events = trace.events if trace is not None else None
    stage1 = greedy_orientation(inst, parts, events)
    stage2 = saturate_non_envied(inst, stage1, parts, events)
    stage3 = enforce_safe_sets(inst, stage2, parts, events)
    if trace is not None:
        trace.snapshots["greedy"] = stage1
        trace.snapshots["saturate"] = stage2
        trace.snapshots["safe"] = stage3
    cur = [set(b) for b in stage3.bundles]
    envied = envied_set(inst, stage3)
    for (a, b), free in _leftover_pairs(inst, stage3):
        envied_ends = [x for x in (a, b) if x in envied]
        if len(envied_ends) != 1:
            raise StructureError(f"leftover pair ({a}, {b}) lacks a unique envied endpoint")
        j = b if envied_ends[0] == a else a
        cur[j] |= free
        if events is not None:
            events.append({"stage": "orient-leftovers", "pair": [a, b], "to": j,
                           "edges": sorted(free)})
    final = _freeze(cur)
    if trace is not None:
        trace.snapshots["final"] = final
    if not (is_complete(inst, final) and is_orientation(inst, final)):
        raise StructureError("result is not a complete orientation")
    half = Fraction(1, 2)
    verdict = check_efx(inst, final, half)
    if not verdict.passed:
        raise StructureError(f"orientation is not half-EFX: {verdict.witnesses[0]}")
    return final


def check_properties(inst: Instance, alloc: Allocation, parts: Bipartition | None = None) -> PropertyFlags:
    """Evaluate the five stage invariants on an arbitrary allocation."""
    parts = resolve_bipartition(inst, parts)
    p1 = is_orientation(inst, alloc) and check_efx(inst, alloc).passed

    p2 = True
    assigned = alloc.assigned()
    for a, b in inst.pairs():
        pair_edges = edge_set(inst, a, b)
        held_a = pair_edges & alloc.bundles[a]
        held_b = pair_edges & alloc.bundles[b]
        if (pair_edges & assigned) - held_a - held_b:
            p2 = False
            break
        cutter = t_side_of((a, b), parts)
        cfg = cut(inst, cutter, b if cutter == a else a)
        halves = {cfg.c1, cfg.c2}
        ok = (not held_a and not held_b) \
            or {held_a, held_b} == halves \
            or (not held_b and held_a in halves) \
            or (not held_a and held_b in halves)
        if not ok:
            p2 = False
            break

    p3 = True
    for i in range(inst.n):
        own = bundle_value(inst, i, alloc.bundles[i])
        for bundle in available_bundles(inst, alloc, i, parts):
            if bundle_value(inst, i, bundle) > own:
                p3 = False
                break
        if not p3:
            break

    envied = envied_set(inst, alloc)
    p4 = all(not available_set(inst, alloc, i, parts)
             for i in range(inst.n) if i not in envied)
    p5 = True
    for i in envied:
        safe = safe_set(inst, alloc, i, parts)
        if any(j not in safe for j in enviers_of(inst, alloc, i)):
            p5 = False
            break
    return PropertyFlags(p1, p2, p3, p4, p5)


def envied_only_in_s(inst: Instance, alloc: Allocation, parts: Bipartition) -> bool:
    """Every envied agent lies on the S side."""
    return envied_set(inst, alloc) <= set(parts[0])


def claim_leftover_pairs(inst: Instance, alloc: Allocation, parts: Bipartition) -> bool:
    """After stage 2: every unallocated edge sits in a pair whose envied endpoint
    could still claim it while the non-envied endpoint holds the rest."""
    envied = envied_set(inst, alloc)
    for (a, b), free in _leftover_pairs(inst, alloc):
        envied_ends = [x for x in (a, b) if x in envied]
        if len(envied_ends) != 1:
            return False
        i = envied_ends[0]
        j = b if i == a else a
        if available(inst, alloc, i, j, parts) != free:
            return False
        if not (edge_set(inst, a, b) - free) <= alloc.bundles[j]:
            return False
    return True


def claim_non_envied_bound(inst: Instance, alloc: Allocation) -> bool:
    """After stage 2: no non-envied agent values her unallocated incident edges
    above her own bundle."""
    envied = envied_set(inst, alloc)
    for i in range(inst.n):
        if i in envied:
            continue
        pending = unallocated_incident(inst, alloc, i)
        if bundle_value(inst, i, pending) > bundle_value(inst, i, alloc.bundles[i]):
            return False
    return True
