"""Multi-graph fair-division instances: exact rational values, structure queries, JSON I/O.

Agents are vertices, items are edges; an item is worth something only to its two
endpoint agents.  All arithmetic is exact (``fractions.Fraction``); nothing in this
package touches floating point.
"""
from __future__ import annotations

import json
import re
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import IO, Iterable, Sequence

Rational = Fraction

FAMILY_STAR = "multi-star"
FAMILY_CYCLE = "multi-cycle"
FAMILY_TREE = "multi-tree"
FAMILY_BIPARTITE = "bipartite"
FAMILY_GENERAL = "general"


class InstanceError(ValueError):
    """Malformed instance or allocation data."""


class StructureError(ValueError):
    """An operation was asked to run on a graph shape it does not support."""


_RATIONAL_RE = re.compile(r"^-?\d+(/\d+)?$")


def parse_rational(raw: int | str) -> Fraction:
    """Parse ``p`` or ``p/q`` into an exact rational (normalized to lowest terms)."""
    if isinstance(raw, bool):
        raise InstanceError(f"not a rational: {raw!r}")
    if isinstance(raw, int):
        return Fraction(raw)
    if isinstance(raw, str):
        text = raw.strip()
        if _RATIONAL_RE.match(text):
            return Fraction(text)
    raise InstanceError(f"not a rational: {raw!r} (expected digits or digits/digits)")


def format_rational(value: Fraction) -> str:
    return str(value)


@dataclass(frozen=True)
class EdgeItem:
    """One item, shared by its two endpoint agents.

    ``id`` is the item's position in the instance edge list.  ``wu``/``wv`` are the
    positive values the item has for ``u``/``v``; every other agent values it at 0.
    """

    id: int
    u: int
    v: int
    wu: Fraction
    wv: Fraction

    def value_for(self, agent: int) -> Fraction:
        if agent == self.u:
            return self.wu
        if agent == self.v:
            return self.wv
        return Fraction(0)

    def endpoints(self) -> tuple[int, int]:
        return (self.u, self.v)


@dataclass(frozen=True)
class Instance:
    """A multi-graph instance: ``n`` agents and an ordered list of edge items."""

    n: int
    edges: tuple[EdgeItem, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 1:
            raise InstanceError(f"agent count must be a positive integer, got {self.n!r}")
        for k, e in enumerate(self.edges):
            if e.id != k:
                raise InstanceError(f"edge {k}: id {e.id} does not match its position")
            if e.u == e.v:
                raise InstanceError(f"edge {k}: self-loop on agent {e.u}")
            for a in (e.u, e.v):
                if not isinstance(a, int) or not (0 <= a < self.n):
                    raise InstanceError(f"edge {k}: agent id {a} out of range [0, {self.n})")
            if e.wu <= 0 or e.wv <= 0:
                raise InstanceError(f"edge {k}: non-positive weight")

    @property
    def m(self) -> int:
        return len(self.edges)

    def value(self, agent: int, edge_id: int) -> Fraction:
        return self.edges[edge_id].value_for(agent)

    def incident(self, agent: int) -> frozenset[int]:
        return frozenset(e.id for e in self.edges if agent in (e.u, e.v))

    def pairs(self) -> list[tuple[int, int]]:
        """Sorted list of adjacent agent pairs (i < j) sharing at least one edge."""
        return sorted({(min(e.u, e.v), max(e.u, e.v)) for e in self.edges})


def build_instance(n: int, edge_specs: Iterable[tuple[int, int, Fraction | int | str, Fraction | int | str]]) -> Instance:
    """Construct an Instance from (u, v, wu, wv) tuples, assigning ids by position."""
    edges = tuple(
        EdgeItem(k, u, v, parse_rational(wu) if not isinstance(wu, Fraction) else wu,
                 parse_rational(wv) if not isinstance(wv, Fraction) else wv)
        for k, (u, v, wu, wv) in enumerate(edge_specs)
    )
    return Instance(n, edges)


def edge_set(inst: Instance, i: int, j: int) -> frozenset[int]:
    """All edge ids between agents i and j (symmetric; empty if not adjacent)."""
    if i == j:
        raise ValueError(f"edge_set needs two distinct agents, got ({i}, {j})")
    return frozenset(e.id for e in inst.edges if {e.u, e.v} == {i, j})


@dataclass(frozen=True)
class Allocation:
    """Disjoint per-agent bundles of edge ids; edges absent everywhere are unallocated."""

    bundles: tuple[frozenset[int], ...]

    def assigned(self) -> frozenset[int]:
        out: set[int] = set()
        for b in self.bundles:
            out |= b
        return frozenset(out)

    def holder_map(self) -> dict[int, int]:
        return {e: a for a, b in enumerate(self.bundles) for e in b}


def make_allocation(n: int, bundles: Iterable[Iterable[int]]) -> Allocation:
    """Build an Allocation, padding missing trailing bundles with empty sets."""
    parts = [frozenset(b) for b in bundles]
    if len(parts) > n:
        raise InstanceError(f"allocation has {len(parts)} bundles for {n} agents")
    parts += [frozenset()] * (n - len(parts))
    return Allocation(tuple(parts))


def validate_allocation(inst: Instance, alloc: Allocation) -> None:
    if len(alloc.bundles) != inst.n:
        raise InstanceError(f"allocation has {len(alloc.bundles)} bundles for {inst.n} agents")
    seen: set[int] = set()
    for a, bundle in enumerate(alloc.bundles):
        for e in bundle:
            if not isinstance(e, int) or isinstance(e, bool) or not (0 <= e < inst.m):
                raise InstanceError(f"bundle {a}: edge id {e!r} out of range [0, {inst.m})")
            if e in seen:
                raise InstanceError(f"edge id {e} assigned to more than one agent")
            seen.add(e)


def is_complete(inst: Instance, alloc: Allocation) -> bool:
    return len(alloc.assigned()) == inst.m


def is_orientation(inst: Instance, alloc: Allocation) -> bool:
    """True when every assigned edge sits at one of its two endpoints."""
    for a, bundle in enumerate(alloc.bundles):
        for e in bundle:
            if a not in inst.edges[e].endpoints():
                return False
    return True


# ---------------------------------------------------------------------------
# structure analysis


@dataclass(frozen=True)
class StructureReport:
    """Skeleton-level facts: multiplicity, distances, bipartition, family label.

    ``diameter`` is the standard shortest-path diameter of the skeleton;
    ``longest_path`` is the exact length of the longest simple path (they differ on
    cyclic skeletons).  On a disconnected skeleton, ``diameter``/``center`` refer to
    the largest component and ``connected`` is False.
    """

    n: int
    m: int
    q: int
    diameter: int
    longest_path: int | None
    center: int
    connected: bool
    bipartition: tuple[tuple[int, ...], tuple[int, ...]] | None
    family: str

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "q": self.q,
            "diameter": self.diameter,
            "longest_path": self.longest_path,
            "center": self.center,
            "connected": self.connected,
            "bipartition": None if self.bipartition is None else {
                "s": list(self.bipartition[0]),
                "t": list(self.bipartition[1]),
            },
            "family": self.family,
        }


def skeleton_adjacency(inst: Instance) -> dict[int, set[int]]:
    adj: dict[int, set[int]] = {v: set() for v in range(inst.n)}
    for e in inst.edges:
        adj[e.u].add(e.v)
        adj[e.v].add(e.u)
    return adj


def connected_components(inst: Instance) -> list[list[int]]:
    adj = skeleton_adjacency(inst)
    seen: set[int] = set()
    comps: list[list[int]] = []
    for start in range(inst.n):
        if start in seen:
            continue
        comp = [start]
        seen.add(start)
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    comp.append(y)
                    queue.append(y)
        comps.append(sorted(comp))
    return comps


def _bfs_distances(adj: dict[int, set[int]], source: int) -> dict[int, int]:
    dist = {source: 0}
    queue = deque([source])
    while queue:
        x = queue.popleft()
        for y in adj[x]:
            if y not in dist:
                dist[y] = dist[x] + 1
                queue.append(y)
    return dist


def two_coloring(inst: Instance) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    """Canonical bipartition of the skeleton, or None if an odd cycle exists.

    Per connected component the color class holding the component's lowest agent id
    goes to the S side, so agent 0 always lands in S.
    """
    adj = skeleton_adjacency(inst)
    color: dict[int, int] = {}
    s_side: set[int] = set()
    t_side: set[int] = set()
    for comp in connected_components(inst):
        root = comp[0]
        color[root] = 0
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if y not in color:
                    color[y] = 1 - color[x]
                    queue.append(y)
                elif color[y] == color[x]:
                    return None
        s_side.update(v for v in comp if color[v] == 0)
        t_side.update(v for v in comp if color[v] == 1)
    return (tuple(sorted(s_side)), tuple(sorted(t_side)))


def _longest_simple_path(adj: dict[int, set[int]], vertices: Sequence[int]) -> int:
    best = 0

    def extend(x: int, visited: set[int], length: int) -> None:
        nonlocal best
        best = max(best, length)
        for y in adj[x]:
            if y not in visited:
                visited.add(y)
                extend(y, visited, length + 1)
                visited.remove(y)

    for v in vertices:
        extend(v, {v}, 0)
    return best


def _component_family(inst: Instance, comp: list[int], adj: dict[int, set[int]]) -> str:
    size = len(comp)
    skeleton_edges = sum(len(adj[v]) for v in comp) // 2
    degrees = [len(adj[v]) for v in comp]
    if skeleton_edges == size - 1 and (size <= 2 or max(degrees) == size - 1):
        return FAMILY_STAR
    if size >= 3 and skeleton_edges == size and all(d == 2 for d in degrees):
        return FAMILY_CYCLE
    if skeleton_edges == size - 1:
        return FAMILY_TREE
    colors = {comp[0]: 0}
    queue = deque([comp[0]])
    while queue:
        x = queue.popleft()
        for y in adj[x]:
            if y not in colors:
                colors[y] = 1 - colors[x]
                queue.append(y)
            elif colors[y] == colors[x]:
                return FAMILY_GENERAL
    return FAMILY_BIPARTITE


def analyze_structure(inst: Instance) -> StructureReport:
    """Compute q, distances, canonical bipartition and the most specific family label."""
    adj = skeleton_adjacency(inst)
    multiplicity: dict[tuple[int, int], int] = {}
    for e in inst.edges:
        key = (min(e.u, e.v), max(e.u, e.v))
        multiplicity[key] = multiplicity.get(key, 0) + 1
    q = max(multiplicity.values(), default=0)

    comps = connected_components(inst)
    main = max(comps, key=lambda c: (len(c), -c[0]))
    dists = {v: _bfs_distances(adj, v) for v in main}
    ecc = {v: max(dists[v].values()) for v in main}
    diameter = max(ecc.values())
    center = min(v for v in main if ecc[v] == min(ecc.values()))
    longest = _longest_simple_path(adj, range(inst.n)) if inst.n <= 12 else None

    bipartition = two_coloring(inst)
    families = {_component_family(inst, comp, adj) for comp in comps}
    if len(comps) == 1:
        family = next(iter(families))
    elif families <= {FAMILY_STAR}:
        family = FAMILY_STAR
    elif families <= {FAMILY_STAR, FAMILY_TREE}:
        family = FAMILY_TREE
    elif bipartition is not None:
        family = FAMILY_BIPARTITE
    else:
        family = FAMILY_GENERAL

    return StructureReport(
        n=inst.n,
        m=inst.m,
        q=q,
        diameter=diameter,
        longest_path=longest,
        center=center,
        connected=len(comps) == 1,
        bipartition=bipartition,
        family=family,
    )


# ---------------------------------------------------------------------------
# JSON I/O


def instance_to_json(inst: Instance) -> dict:
    return {
        "n": inst.n,
        "edges": [
            {"u": e.u, "v": e.v, "wu": format_rational(e.wu), "wv": format_rational(e.wv)}
            for e in inst.edges
        ],
    }


def instance_to_text(inst: Instance) -> str:
    return json.dumps(instance_to_json(inst), indent=2) + "\n"


def instance_from_json(doc: object) -> Instance:
    if not isinstance(doc, dict):
        raise InstanceError("instance document must be a JSON object")
    if "n" not in doc or "edges" not in doc:
        raise InstanceError("instance document needs 'n' and 'edges'")
    n = doc["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise InstanceError(f"'n' must be a positive integer, got {n!r}")
    raw_edges = doc["edges"]
    if not isinstance(raw_edges, list):
        raise InstanceError("'edges' must be a list")
    edges = []
    for k, rec in enumerate(raw_edges):
        if not isinstance(rec, dict):
            raise InstanceError(f"edge {k}: expected an object")
        try:
            u, v = rec["u"], rec["v"]
            wu = parse_rational(rec["wu"])
            wv = parse_rational(rec["wv"])
        except KeyError as exc:
            raise InstanceError(f"edge {k}: missing field {exc.args[0]!r}") from None
        except InstanceError as exc:
            raise InstanceError(f"edge {k}: {exc}") from None
        if wu <= 0 or wv <= 0:
            raise InstanceError(f"non-positive weight at edge {k}")
        edges.append(EdgeItem(k, u, v, wu, wv))
    return Instance(n, tuple(edges))


def load_instance(source: str | Path | IO[str]) -> Instance:
    """Load an instance from a path or an open text stream."""
    if hasattr(source, "read"):
        text = source.read()
    else:
        text = Path(source).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"invalid JSON: {exc}") from None
    return instance_from_json(doc)


def save_instance(inst: Instance, target: str | Path | IO[str]) -> None:
    text = instance_to_text(inst)
    if hasattr(target, "write"):
        target.write(text)
    else:
        Path(target).write_text(text)


def allocation_to_json(alloc: Allocation) -> dict:
    return {"bundles": [sorted(b) for b in alloc.bundles]}


def allocation_from_json(doc: object, inst: Instance) -> Allocation:
    if not isinstance(doc, dict) or "bundles" not in doc:
        raise InstanceError("allocation document needs 'bundles'")
    raw = doc["bundles"]
    if not isinstance(raw, list) or len(raw) != inst.n:
        raise InstanceError(f"'bundles' must be a list of exactly {inst.n} lists")
    alloc = Allocation(tuple(frozenset(b) for b in raw))
    validate_allocation(inst, alloc)
    return alloc


def load_allocation(source: str | Path | IO[str], inst: Instance) -> Allocation:
    if hasattr(source, "read"):
        text = source.read()
    else:
        text = Path(source).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"invalid JSON: {exc}") from None
    return allocation_from_json(doc, inst)
