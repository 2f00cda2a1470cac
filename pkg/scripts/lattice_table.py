"""Print rank, Hermite generators and Smith invariants of the zonotopal f-vector lattice per dimension."""

import argparse
import json
import time

from cubeparity.lattice import F, mine_modular_equations, saturation, smith_invariants, span_E


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-dim", type=int, default=10)
    ap.add_argument("--json", action="store_true", help="one JSON object per line")
    args = ap.parse_args()

    for d in range(1, args.max_dim + 1):
        t0 = time.perf_counter()
        L = span_E(d)
        inv = smith_invariants(L, saturation(L))
        eqs = mine_modular_equations([F(d, n).as_list() for n in range(d + 2)], include_exact=False)
        row = {
            "d": d,
            "rank": L.rank,
            "expected_rank": (d + 1) // 2,
            "invariants": inv,
            "moduli": sorted({e.modulus for e in eqs}),
            "seconds": round(time.perf_counter() - t0, 3),
        }
        if args.json:
            print(json.dumps(row, sort_keys=True))
        else:
            print(f"d={d:2d}  rank={row['rank']} (expect {row['expected_rank']})  invariants={inv}  moduli={row['moduli']}  {row['seconds']}s")


if __name__ == "__main__":
    main()
