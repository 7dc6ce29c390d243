#!/usr/bin/env python3
"""Geometric phase versus enclosed loop area in the displacement plane.

Sweeps the radius of a circular (X1, X2) loop and tabulates the loop phase
against -2 * area.  Output is CSV on stdout or to --out.
"""

import argparse
import math

from landau_holonomy import abelian_phase, circle_x1x2, signed_area


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--radii", default="0.25,0.5,0.75,1.0,1.5,2.0")
    ap.add_argument("--segments", type=int, default=20_000)
    ap.add_argument("--out", default=None)
    args = ap.parse_args()

    lines = ["radius,area,gamma,minus_two_area,rel_err_vs_smooth"]
    for radius in (float(tok) for tok in args.radii.split(",")):
        path = circle_x1x2(radius=radius, segments=args.segments)
        area = signed_area(path, "X1X2")
        gamma = abelian_phase(path).abelian_phase
        smooth = -2.0 * math.pi * radius**2
        lines.append(
            f"{radius:.6g},{area:.12e},{gamma:.12e},{-2 * area:.12e},"
            f"{abs(gamma - smooth) / abs(smooth):.3e}"
        )
    table = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(table)
    else:
        print(table, end="")


if __name__ == "__main__":
    main()
