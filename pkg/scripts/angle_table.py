"""Minimal admissible opening angle per weight family, as a CSV table."""

import argparse
import sys

from carleman.io import write_csv
from carleman.search import FamilySpec, bisect_min_angle

SPECS = {
    "sverak": FamilySpec.sverak,
    "cospow": FamilySpec.cospow,
    "poly": FamilySpec.poly10,
}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--tol-deg", type=float, default=0.01)
    ap.add_argument("--grid-n", type=int, nargs="+", default=[4001, 8001])
    ap.add_argument("--out", default="-")
    args = ap.parse_args(argv)
    rows = []
    for name, make in SPECS.items():
        for n in args.grid_n:
            res = bisect_min_angle(make(), 90.0, 130.0, tol_deg=args.tol_deg, grid_n=n)
            lo, hi = res.bracket
            rows.append((name, n, lo, hi, res.iterations))
    write_csv(["family", "grid_n", "fail_deg", "pass_deg", "iterations"], rows,
              args.out)


if __name__ == "__main__":
    sys.exit(main())
