#!/usr/bin/env python3
"""Compare exact subgroup counts with the order^log2(order) bound.

Runs the enumerator over a catalog of small groups and prints how slack the
bound actually is.  Elementary abelian 2-groups are the worst case in the
catalog, which is why the bound carries a log exponent at all.
"""

import argparse

from tatekit.gmodule import cyclic, dihedral, direct_product, klein_four, quaternion
from tatekit.tower import subgroup_bound_check


def catalog(max_order):
    groups = {}
    for n in range(1, max_order + 1):
        groups[f"Z{n}"] = cyclic(n)
    for n in range(3, max_order // 2 + 1):
        groups[f"D{n}"] = dihedral(n)
    groups["V4"] = klein_four()
    groups["Q8"] = quaternion()
    groups["Z2^3"] = direct_product(klein_four(), cyclic(2))
    groups["Z2^4"] = direct_product(
        direct_product(klein_four(), cyclic(2)), cyclic(2)
    )
    return {k: g for k, g in groups.items() if g.order <= max_order}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-order", type=int, default=16)
    args = ap.parse_args()

    print(f"{'group':>6} {'order':>5} {'count':>6} {'bound':>10} {'ratio':>8}")
    for name, g in sorted(catalog(args.max_order).items(), key=lambda kv: kv[1].order):
        rep = subgroup_bound_check(g)
        ratio = rep.subgroup_count / rep.bound
        print(
            f"{name:>6} {rep.group_order:>5} {rep.subgroup_count:>6}"
            f" {rep.bound:>10} {ratio:>8.2e}"
        )


if __name__ == "__main__":
    main()
