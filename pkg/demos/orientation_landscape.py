"""When do fully non-wasteful (orientation) solutions exist?

For every benchmark family the exhaustive oracle settles the question exactly:
stars always admit EFX orientations (any multiplicity), shallow thin trees do as
well, and each of the four counter-example families admits none.

Run:  python demos/orientation_landscape.py
"""
from efx_multigraph import (
    analyze_structure,
    c4_counter,
    decide_efx_orientation,
    p3_block,
    p4_q3,
    p4_qn,
    p6_counter,
    random_instance,
    solve_multistar,
    solve_multitree_d4_q2,
)


def main():
    print("constructive side: solvers that always succeed")
    star = random_instance(6, 15, 5, "star", seed=3)
    solve_multistar(star)
    print("  multi-star, q=5, 15 items            -> EFX orientation found")
    tree = random_instance(8, 12, 2, "tree", seed=4)
    solve_multitree_d4_q2(tree)
    print("  multi-tree, diameter<=4, q=2, 12 it. -> EFX orientation found")

    print("\nimpossibility side: exhaustive search over all orientations")
    rows = [
        ("4-cycle, q=2", c4_counter()),
        ("4-path, q=3", p4_q3()),
        ("4-path, q=4", p4_qn(4)),
        ("4-path, q=5", p4_qn(5)),
        ("6-path, q=2 (two blocks + bridge)", p6_counter()),
    ]
    for label, inst in rows:
        rep = analyze_structure(inst)
        res = decide_efx_orientation(inst, count=True)
        print(f"  {label:<36} states={res.state_space:<5} EFX orientations={res.count}")

    print("\nthe three-agent building block is the boundary case:")
    block = p3_block()
    res = decide_efx_orientation(block, count=True)
    print(f"  3-path, q=2: EFX orientations exist, but only {res.count} of "
          f"{res.state_space}, and the far endpoint is envied in each")


if __name__ == "__main__":
    main()
