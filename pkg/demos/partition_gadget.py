"""Deciding EFX-orientation existence is as hard as the Partition problem.

The eight-agent gadget forces the two bridge items onto the middle pair, whose
parallel items (valued by a chosen integer multiset) must then split into two
halves of exactly equal sum.  So the oracle's verdict on the gadget answers
"can this multiset be partitioned evenly?".

Run:  python demos/partition_gadget.py
"""
from itertools import combinations

from efx_multigraph import decide_efx_orientation, reduce_partition


def splits_evenly(values):
    total = sum(values)
    if total % 2:
        return False
    return any(sum(c) == total // 2
               for r in range(len(values) + 1)
               for c in combinations(values, r))


def main():
    cases = [
        (1, 2, 3),
        (1, 1, 1),
        (2,),
        (3, 1, 4, 2),
        (5, 5, 6),
        (6, 1, 2, 3),
    ]
    print(f"{'multiset':<16} {'even split?':<12} {'EFX orientation?':<18} agree")
    for values in cases:
        gadget = reduce_partition(values)
        res = decide_efx_orientation(gadget)
        expected = splits_evenly(values)
        mark = "yes" if res.exists == expected else "NO!"
        print(f"{str(values):<16} {str(expected):<12} {str(res.exists):<18} {mark}")
        if res.exists:
            middle = [sorted(b) for b in res.witness.bundles][3:5]
            print(f"{'':16} witness middle bundles: {middle}")


if __name__ == "__main__":
    main()
