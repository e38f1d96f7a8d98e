"""Complete EFX allocations on cycle skeletons, even and odd.

An even cycle is bipartite and goes through the three-stage solver.  An odd
cycle needs the dedicated route: either some adjacent pair disagrees about the
halves of a cut (settle that pair, solve the remaining even path), or all
preferences are aligned and two adjacent agents are lifted out and paid from
the three boundary cuts.

Run:  python demos/cycle_solver.py
"""
from efx_multigraph import (
    build_instance,
    c4_counter,
    check_efx,
    decide_efx_orientation,
    is_orientation,
    random_instance,
    solve_multicycle,
)


def report(label, inst):
    alloc = solve_multicycle(inst)
    print(f"{label}: EFX={check_efx(inst, alloc).passed} "
          f"orientation={is_orientation(inst, alloc)}")
    return alloc


def main():
    inst = c4_counter()
    alloc = report("even 4-cycle (the orientation counter-example)", inst)
    print("  no EFX orientation exists here:", not decide_efx_orientation(inst).exists)
    print("  so some items had to leave their endpoints:",
          [sorted(b) for b in alloc.bundles])

    aligned = []
    for i in range(5):
        j = (i + 1) % 5
        a, b = min(i, j), max(i, j)
        aligned += [(a, b, 2, 2), (a, b, 1, 1)]
    report("odd 5-cycle, aligned preferences (lift-out route)", build_instance(5, aligned))

    mixed = random_instance(7, 14, 2, "cycle", num_max=30, den_max=4, seed=12)
    report("odd 7-cycle, random values", mixed)


if __name__ == "__main__":
    main()
