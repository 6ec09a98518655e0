"""Truncated extremal norm construction for a two-member family.

Computes certified radius bounds, builds the polyhedral norm truncation
at increasing depths, and reports functional counts, extremality
residuals and the eccentricity against the base gauge.
"""

from __future__ import annotations

import argparse

import numpy as np

from conejsr import (
    JsrParams,
    base_monotone_norm,
    build_extremal_norm,
    discrete_family,
    eccentricity,
    extremality_residual,
    jsr_bounds,
    orthant,
)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-depth", type=int, default=8)
    ap.add_argument("--mode", choices=("monotone", "absolute"), default="monotone")
    args = ap.parse_args()

    cone = orthant(2)
    family = discrete_family(
        [np.array([[1.0, 1.0], [0.0, 1.0]]), np.array([[1.0, 0.0], [1.0, 1.0]])]
    )
    bounds = jsr_bounds(family, cone, JsrParams(depth=40, delta=0.02))
    print(f"certified radius interval: [{bounds.lower:.10f}, {bounds.upper:.10f}]")
    base = base_monotone_norm(cone)

    print("\ndepth   rows   residual        eccentricity")
    for depth in range(1, args.max_depth + 1):
        v = build_extremal_norm(family, cone, rho_hat=bounds.upper, depth=depth,
                                mode=args.mode)
        res = extremality_residual(v, family, rng=0)
        ecc = eccentricity(v, base)
        print(f"{depth:5d}   {v.functionals.shape[0]:4d}   {res.residual: .3e}   {ecc:.6f}")

    v = build_extremal_norm(family, cone, rho_hat=bounds.upper, depth=args.max_depth,
                            mode=args.mode)
    print("\nfinal functional table (rows w with v(x) = max |w . x|):")
    for row in v.functionals:
        print("   ", np.round(row, 6).tolist())


if __name__ == "__main__":
    main()
