"""Extremal opening angle from the shooting method across radial degrees alpha."""

import argparse

import numpy as np

from carleman.errors import StiffnessError
from carleman.extremal_ode import StepControl, shoot
from carleman.io import write_csv


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--alphas", type=float, nargs="+",
                    default=[1.1, 1.2, 1.3, 1.4, 1.5, 1.6, 1.7, 1.8, 1.9, 1.99, 1.999999])
    ap.add_argument("--refine", type=float, default=10.0, help="tolerance refinement factor for the check column")
    ap.add_argument("--out", default="-")
    args = ap.parse_args(argv)
    rows = []
    for a in args.alphas:
        try:
            base = shoot(a)
            fine = shoot(a, StepControl().refined(args.refine))
            rows.append((a, base.theta_deg, fine.theta_deg - base.theta_deg, len(base.trajectory), "converged"))
        except StiffnessError as e:
            rows.append((a, 2 * np.degrees(e.result.half_angle), float("nan"), len(e.result.trajectory), "stiff"))
    write_csv(["alpha", "theta_deg", "refine_delta_deg", "steps", "status"], rows, args.out)


if __name__ == "__main__":
    main()
