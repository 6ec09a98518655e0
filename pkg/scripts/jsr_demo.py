"""Certified joint spectral radius bounds for the Fibonacci pair.

Runs the branch-and-bound search on {[[1,1],[0,1]], [[1,0],[1,1]]} (whose
radius is the golden ratio) and prints the certified interval together
with the per-depth norm/spectral-radius averages.
"""

from __future__ import annotations

import argparse
import math

import numpy as np

from conejsr import JsrParams, discrete_family, jsr_bounds, orthant


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--depth", type=int, default=40)
    ap.add_argument("--delta", type=float, default=0.02)
    ap.add_argument("--norm", choices=("auto", "inf", "two"), default="auto")
    args = ap.parse_args()

    family = discrete_family(
        [np.array([[1.0, 1.0], [0.0, 1.0]]), np.array([[1.0, 0.0], [1.0, 1.0]])],
        labels=["upper", "lower"],
    )
    bounds = jsr_bounds(family, orthant(2),
                        JsrParams(depth=args.depth, delta=args.delta, norm=args.norm))

    golden = (1.0 + math.sqrt(5.0)) / 2.0
    print(f"norm used : {bounds.norm_used}")
    print(f"lower     : {bounds.lower:.12f}  (golden ratio {golden:.12f})")
    print(f"upper     : {bounds.upper:.12f}")
    print(f"width     : {bounds.width:.3e}   nodes: {bounds.nodes}")
    print(f"witness   : {bounds.lower_witness}")
    print()
    print("  t   max ||S||^(1/t)   max r(S)^(1/t)")
    for t, nrm, spec in bounds.per_depth:
        print(f"{t:3.0f}   {nrm:15.10f}   {spec:14.10f}")


if __name__ == "__main__":
    main()
