"""Perturbation experiment: how fast can the radius move under small edits?

Perturbs every member of the permutation family {swap, id} inside the
cone-preserving set, recomputes certified bounds per trial, and compares
the observed variation against the eccentricity constant of the family's
extremal norm.
"""

from __future__ import annotations

import argparse
import math

import numpy as np

from conejsr import JsrParams, discrete_family, lipschitz_experiment, orthant


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--epsilon", type=float, default=0.05)
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--depth", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--threads", type=int, default=None)
    args = ap.parse_args()

    family = discrete_family(
        [np.array([[0.0, 1.0], [1.0, 0.0]]), np.eye(2)], labels=["swap", "id"]
    )
    rep = lipschitz_experiment(
        family, orthant(2), epsilon=args.epsilon, trials=args.trials,
        jsr_params=JsrParams(depth=args.depth, delta=None),
        rng=args.seed, threads=args.threads,
    )

    print(f"base interval   : [{rep.base_lower:.10f}, {rep.base_upper:.10f}]")
    print(f"eccentricity C  : {rep.ecc_bound:.6f}")
    print(f"trials          : {rep.trials}  (ratio-forming: {len(rep.ratios)}, "
          f"skipped: {rep.skipped}, outside: {rep.outside_count})")
    print(f"violations      : {rep.inequality_violations}")
    print(f"max ratio       : {rep.max_ratio:.6f}")
    print("\n   H (gauge)     |mid shift|    ratio")
    for r in rep.records:
        ratio = "   --   " if math.isnan(r.ratio) else f"{r.ratio:.6f}"
        print(f"   {r.hausdorff:.6f}      {r.mid_delta:.6f}     {ratio}")


if __name__ == "__main__":
    main()
