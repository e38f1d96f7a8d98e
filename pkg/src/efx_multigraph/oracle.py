"""Exhaustive ground truth: existence (and counts) of EFX orientations/allocations.

The search walks assignment vectors in lexicographic edge order, so the first
witness found is canonical regardless of pruning or worker count.  Pruning cuts a
branch only when some agent whose own value is already final strongly envies a
bundle that can only keep growing, which cannot be repaired by later assignments.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .fairness import check_efx
from .model import Allocation, Instance

DEFAULT_BUDGET = 10_000_000


class BudgetExceededError(RuntimeError):
    """The requested search space is larger than the allowed budget."""


@dataclass(frozen=True)
class OracleResult:
    target: str
    exists: bool
    witness: Allocation | None
    count: int | None
    state_space: int
    explored: int

    def to_json(self) -> dict:
        return {
            "target": self.target,
            "exists": self.exists,
            "witness": None if self.witness is None else [sorted(b) for b in self.witness.bundles],
            "count": self.count,
            "state_space": self.state_space,
            "explored": self.explored,
        }


class _Search:
    """DFS state shared across the recursion; values are exact rationals."""

    def __init__(self, inst: Instance, choices: list[tuple[int, ...]], prune: bool,
                 counting: bool):
        n = inst.n
        self.inst = inst
        self.choices = choices
        self.prune = prune
        self.counting = counting
        self.val = [[Fraction(0)] * n for _ in range(n)]
        self.bundles: list[list[int]] = [[] for _ in range(n)]
        self.remaining = [0] * n
        for e in inst.edges:
            self.remaining[e.u] += 1
            self.remaining[e.v] += 1
        self.assignment: list[int] = []
        self.witness: list[int] | None = None
        self.count = 0
        self.explored = 0

    def _strongly_envies(self, x: int, k: int) -> bool:
        own = self.val[x][x]
        other = self.val[x][k]
        if other <= own:
            return False
        edges = self.inst.edges
        worst = min(edges[g].value_for(x) for g in self.bundles[k])
        return own < other - worst

    def _leaf_is_efx(self) -> bool:
        n = self.inst.n
        for x in range(n):
            for k in range(n):
                if k != x and self.bundles[k] and self._strongly_envies(x, k):
                    return False
        return True

    def run(self, depth: int) -> bool:
        """Explore below the current prefix; True means stop (witness found and
        no count requested)."""
        self.explored += 1
        inst = self.inst
        if depth == len(self.choices):
            if not self.prune and not self._leaf_is_efx():
                return False
            if self.witness is None:
                self.witness = list(self.assignment)
                if not self.counting:
                    return True
            self.count += 1
            return False
        edge = inst.edges[depth]
        for k in self.choices[depth]:
            self.val[edge.u][k] += edge.wu
            self.val[edge.v][k] += edge.wv
            self.bundles[k].append(depth)
            self.remaining[edge.u] -= 1
            self.remaining[edge.v] -= 1
            self.assignment.append(k)

            dead = False
            if self.prune:
                for x in (edge.u, edge.v):
                    if self.remaining[x] == 0:
                        for k2 in range(inst.n):
                            if k2 != x and self.bundles[k2] and self._strongly_envies(x, k2):
                                dead = True
                                break
                    if dead:
                        break
                if not dead:
                    for x in range(inst.n):
                        if x != k and self.remaining[x] == 0 and self._strongly_envies(x, k):
                            dead = True
                            break

            stop = False if dead else self.run(depth + 1)

            self.assignment.pop()
            self.remaining[edge.u] += 1
            self.remaining[edge.v] += 1
            self.bundles[k].pop()
            self.val[edge.u][k] -= edge.wu
            self.val[edge.v][k] -= edge.wv
            if stop:
                return True
        return False

    def run_with_prefix(self, prefix: tuple[int, ...]) -> bool:
        """Apply a fixed prefix (pruning it like any other branch), then explore."""
        if not prefix:
            return self.run(0)
        k = prefix[0]
        edge = self.inst.edges[len(self.assignment)]
        self.val[edge.u][k] += edge.wu
        self.val[edge.v][k] += edge.wv
        self.bundles[k].append(edge.id)
        self.remaining[edge.u] -= 1
        self.remaining[edge.v] -= 1
        self.assignment.append(k)
        dead = False
        if self.prune:
            for x in (edge.u, edge.v):
                if self.remaining[x] == 0:
                    for k2 in range(self.inst.n):
                        if k2 != x and self.bundles[k2] and self._strongly_envies(x, k2):
                            dead = True
                            break
                if dead:
                    break
            if not dead:
                for x in range(self.inst.n):
                    if x != k and self.remaining[x] == 0 and self._strongly_envies(x, k):
                        dead = True
                        break
        if dead:
            return False
        return self.run_with_prefix(prefix[1:]) if len(prefix) > 1 else self.run(len(self.assignment))


def _witness_allocation(inst: Instance, assignment: list[int]) -> Allocation:
    bundles: list[set[int]] = [set() for _ in range(inst.n)]
    for e, k in enumerate(assignment):
        bundles[k].add(e)
    return Allocation(tuple(frozenset(b) for b in bundles))


def _run_task(args: tuple[Instance, list[tuple[int, ...]], tuple[int, ...], bool, bool]) -> tuple[list[int] | None, int, int]:
    inst, choices, prefix, prune, counting = args
    search = _Search(inst, choices, prune, counting)
    search.run_with_prefix(prefix)
    return search.witness, search.count, search.explored


def _decide(inst: Instance, choices: list[tuple[int, ...]], target: str, budget: int,
            counting: bool, prune: bool, jobs: int) -> OracleResult:
    state_space = 1
    for options in choices:
        state_space *= len(options)
    if state_space > budget:
        raise BudgetExceededError(
            f"{target} search needs {state_space} states, budget is {budget}")

    if jobs <= 1 or len(choices) == 0:
        search = _Search(inst, choices, prune, counting)
        search.run(0)
        witness = search.witness
        count = search.count
        explored = search.explored
    else:
        depth = 0
        width = 1
        while width < jobs and depth < len(choices):
            width *= len(choices[depth])
            depth += 1
        tasks = [(inst, choices, prefix, prune, counting)
                 for prefix in product(*choices[:depth])]
        results = _map_tasks(tasks, jobs)
        witness = None
        count = 0
        explored = 0
        for task_witness, task_count, task_explored in results:
            if witness is None and task_witness is not None:
                witness = task_witness
            count += task_count
            explored += task_explored

    alloc = None
    if witness is not None:
        alloc = _witness_allocation(inst, witness)
        verdict = check_efx(inst, alloc)
        if not verdict.passed:
            raise AssertionError(f"oracle produced a non-EFX witness: {verdict.witnesses[0]}")
    return OracleResult(
        target=target,
        exists=witness is not None,
        witness=alloc,
        count=count if counting else None,
        state_space=state_space,
        explored=explored,
    )


def _map_tasks(tasks: list, jobs: int) -> list:
    try:
        from multiprocessing import Pool

        with Pool(processes=jobs) as pool:
            return pool.map(_run_task, tasks)
    except (ImportError, OSError, PermissionError):
        return [_run_task(task) for task in tasks]


def decide_efx_orientation(inst: Instance, budget: int | None = None, count: bool = False,
                           prune: bool = True, jobs: int = 1) -> OracleResult:
    """Search all 2^m complete orientations; returns the lexicographically first
    EFX witness (edge 0 varies slowest, endpoint u before v) and, on request, the
    exact number of EFX orientations."""
    budget = DEFAULT_BUDGET if budget is None else budget
    choices = [(e.u, e.v) for e in inst.edges]
    return _decide(inst, choices, "orientation", budget, count, prune, jobs)


def decide_efx_allocation(inst: Instance, budget: int | None = None,
                          prune: bool = True, jobs: int = 1) -> OracleResult:
    """Search all n^m complete allocations (wasteful ones included); returns the
    lexicographically first EFX witness."""
    budget = DEFAULT_BUDGET if budget is None else budget
    agents = tuple(range(inst.n))
    choices = [agents for _ in inst.edges]
    return _decide(inst, choices, "allocation", budget, False, prune, jobs)
