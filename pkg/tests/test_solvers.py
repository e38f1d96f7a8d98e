from __future__ import annotations

import random

import pytest

from efx_multigraph import (
    StructureError,
    build_instance,
    c4_counter,
    check_efx,
    check_envied_singleton,
    decide_efx_orientation,
    is_complete,
    is_orientation,
    random_instance,
    solve_multicycle,
    solve_multistar,
    solve_multitree_d4_q2,
)


def _solved(inst, alloc, orientation):
    assert is_complete(inst, alloc)
    assert check_efx(inst, alloc).passed
    if orientation:
        assert is_orientation(inst, alloc)


# ---------------------------------------------------------------------------
# stars


def test_star_single_leaf_cut_and_choose():
    inst = build_instance(2, [(0, 1, 10, 10), (0, 1, 9, 9)])
    alloc = solve_multistar(inst)
    assert alloc.bundles[1] == {0}
    assert alloc.bundles[0] == {1}
    _solved(inst, alloc, orientation=True)


def test_star_simple_leaves_take_their_edges():
    inst = build_instance(4, [(0, 1, 1, 2), (0, 2, 1, 3), (0, 3, 1, 4)])
    alloc = solve_multistar(inst)
    assert alloc.bundles[1] == {0}
    assert alloc.bundles[2] == {1}
    assert alloc.bundles[3] == {2}
    assert alloc.bundles[0] == frozenset()
    _solved(inst, alloc, orientation=True)


def test_star_q2_leaf_takes_preferred():
    inst = build_instance(3, [(0, 1, 8, 8), (0, 1, 3, 3), (0, 2, 2, 5), (0, 2, 9, 4)])
    alloc = solve_multistar(inst)
    assert 0 in alloc.bundles[1]  # the 8-edge
    assert 2 in alloc.bundles[2]  # the edge leaf 2 values at 5
    _solved(inst, alloc, orientation=True)


def test_star_rejects_path():
    inst = build_instance(4, [(0, 1, 1, 1), (1, 2, 1, 1), (2, 3, 1, 1)])
    with pytest.raises(StructureError):
        solve_multistar(inst)


def test_star_random_sweep():
    for seed in range(60):
        rng = random.Random(seed)
        n = rng.randint(1, 8)
        m = 0 if n == 1 else rng.randint(n - 1, min(5 * (n - 1), 20))
        inst = random_instance(n, m, 5, "star", num_max=60, den_max=7,
                               symmetric=bool(seed % 2), seed=seed)
        _solved(inst, solve_multistar(inst), orientation=True)


# ---------------------------------------------------------------------------
# trees


def test_tree_star_degenerates_to_base_case():
    inst = build_instance(3, [(0, 1, 5, 5), (0, 1, 4, 4), (0, 2, 3, 3)])
    alloc = solve_multitree_d4_q2(inst)
    _solved(inst, alloc, orientation=True)
    assert alloc.bundles[0] == {0}  # the center keeps its favorite item


def test_tree_case_b_children_take_whole_pairs():
    inst = build_instance(4, [(0, 1, 10, 10), (0, 2, 9, 9), (0, 2, 8, 8),
                              (2, 3, 5, 5), (2, 3, 1, 1)])
    alloc = solve_multitree_d4_q2(inst)
    assert alloc.bundles[2] == {1, 2}
    assert alloc.bundles[3] == {3, 4}
    _solved(inst, alloc, orientation=True)


def test_tree_case_c_reroots_the_branch():
    # The depth-1 agent prefers its child's big item over its center edges: it
    # keeps only that item, the center takes the shared pair back, and the
    # center's old envier is paid off with the center's previous item.
    inst = build_instance(4, [(0, 1, 10, 10), (0, 2, 9, 9), (0, 2, 8, 8),
                              (2, 3, 100, 100), (2, 3, 1, 1)])
    alloc = solve_multitree_d4_q2(inst)
    assert alloc.bundles[2] == {3}
    assert alloc.bundles[3] == {4}
    assert alloc.bundles[0] == {1, 2}
    assert alloc.bundles[1] == {0}
    _solved(inst, alloc, orientation=True)


def test_tree_rejects_deep_or_thick():
    path6 = build_instance(6, [(i, i + 1, 1, 1) for i in range(5)])
    with pytest.raises(StructureError):
        solve_multitree_d4_q2(path6)
    thick = build_instance(2, [(0, 1, 1, 1)] * 3)
    with pytest.raises(StructureError):
        solve_multitree_d4_q2(thick)


def test_tree_random_sweep_with_step_invariants():
    done = 0
    seed = 0
    while done < 80:
        seed += 1
        rng = random.Random(seed)
        n = rng.randint(2, 9)
        m = rng.randint(n - 1, min(2 * (n - 1), 18))
        inst = random_instance(n, m, 2, "tree", num_max=40, den_max=6,
                               symmetric=bool(seed % 2), seed=seed)
        snaps = []
        alloc = solve_multitree_d4_q2(inst, snapshots=snaps)
        _solved(inst, alloc, orientation=True)
        for snap in snaps:
            assert check_envied_singleton(inst, snap).passed
        done += 1


# ---------------------------------------------------------------------------
# cycles


def test_cycle_even_is_solved_via_bipartite_route():
    inst = c4_counter()
    alloc = solve_multicycle(inst)
    _solved(inst, alloc, orientation=False)
    # no orientation exists for this instance, so waste is forced
    assert not is_orientation(inst, alloc)
    assert not decide_efx_orientation(inst).exists


def test_cycle_odd_aligned_preferences_case2():
    pairs = []
    for i in range(5):
        j = (i + 1) % 5
        a, b = min(i, j), max(i, j)
        pairs += [(a, b, 2, 2), (a, b, 1, 1)]
    inst = build_instance(5, pairs)
    alloc = solve_multicycle(inst)
    _solved(inst, alloc, orientation=False)


def test_cycle_triangle_rejected():
    inst = build_instance(3, [(0, 1, 1, 1), (1, 2, 1, 1), (0, 2, 1, 1)])
    with pytest.raises(StructureError, match="3-cycle"):
        solve_multicycle(inst)


def test_cycle_rejects_non_cycle():
    inst = build_instance(3, [(0, 1, 1, 1), (1, 2, 1, 1)])
    with pytest.raises(StructureError):
        solve_multicycle(inst)


def test_cycle_random_sweep():
    done = 0
    seed = 0
    while done < 60:
        seed += 1
        rng = random.Random(seed)
        n = rng.randint(4, 8)
        m = rng.randint(n, min(3 * n, 20))
        inst = random_instance(n, m, 3, "cycle", num_max=30, den_max=5,
                               symmetric=bool(seed % 2), seed=seed)
        _solved(inst, solve_multicycle(inst), orientation=False)
        done += 1
