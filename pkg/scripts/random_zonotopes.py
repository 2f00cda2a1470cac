"""Build zonotope boundaries from random generic arrangements and compare with the F(d, n) recursion.

Also reports the parity checks (odd-index face sum, d = 3 facet congruences) on each sphere.
"""

import argparse
import random

from cubeparity.builders import random_generic_arrangement, zonotope_boundary
from cubeparity.lattice import F, facet_parity_d3_holds
from cubeparity.parity import theorem52_check


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--trials", type=int, default=5)
    ap.add_argument("--max-ambient", type=int, default=4)
    args = ap.parse_args()
    rng = random.Random(args.seed)

    mismatches = 0
    for D in range(2, args.max_ambient + 1):
        for _ in range(args.trials):
            n = rng.randint(D, D + 3)
            Z = zonotope_boundary(random_generic_arrangement(D, n, rng))
            f = Z.f_vector()
            expected = F(D - 1, n - D).as_list()
            rep = theorem52_check(Z)
            extra = f"  d3-congruences={facet_parity_d3_holds(f)}" if len(f) == 4 else ""
            same = f == expected
            mismatches += not same
            print(f"D={D} zones={n}  f={f}  recursion={'ok' if same else expected}  parity_sum={rep['parity_sum']}{extra}")
    print(f"mismatches: {mismatches}")
    return 1 if mismatches else 0


if __name__ == "__main__":
    raise SystemExit(main())
