"""Command-line surface.

Five subcommands over a shared problem-document format::

    conejsr analyze problem.json
    conejsr jsr problem.json --delta 0.02 --depth 40
    conejsr norm problem.json --depth 6 --mode monotone
    conejsr simulate problem.json --out trajectory.csv
    conejsr lipschitz problem.json --epsilon 0.05 --trials 20

Reports are JSON on stdout (simulate prints CSV unless ``--out`` is
given).  Exit code 0 on success, 1 on any validation or input error,
2 when a search exhausted its budget and the report is partial.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .cones import DEFAULT_TOL
from .errors import BudgetExceeded, ConeJsrError, ValidationError
from .irreducible import family_irreducible
from .jsr import JsrParams, jsr_bounds
from .maps import is_cone_preserving, is_cross_positive, is_exp_K_positive, is_K_positive
from .norms import (
    MONOTONE,
    base_monotone_norm,
    build_extremal_norm,
    eccentricity,
    extremality_residual,
    norm_positivity,
)
from .problem import ProblemSpec, parse_problem
from .regularity import lipschitz_experiment
from .semigroup import CONTINUOUS, DISCRETE, JUMP, validate_jump_family
from .maps import matrix_exponential
from .semigroup import evolve_jump

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_BUDGET = 2


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        if math.isnan(v):
            return None
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def _add_common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("problem", help="path to a problem JSON document")
    sp.add_argument("--tol", type=float, default=DEFAULT_TOL,
                    help="geometric tolerance for cone tests")
    sp.add_argument("--seed", type=int, default=0,
                    help="seed for all randomized routines")
    sp.add_argument("--budget", type=int, default=1_000_000,
                    help="node budget for product enumeration")
    sp.add_argument("--depth", type=int, default=None,
                    help="search or truncation depth (command specific default)")
    sp.add_argument("--delta", type=float, default=None,
                    help="branch-and-bound gap target")
    sp.add_argument("--threads", type=int, default=None,
                    help="worker threads (default: CONEJSR_THREADS or 1)")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="conejsr",
                                description="Cone-preserving switched systems toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("analyze", help="classify members and test irreducibility")
    _add_common(sp)

    sp = sub.add_parser("jsr", help="certified joint spectral radius bounds")
    _add_common(sp)
    sp.add_argument("--norm", choices=("auto", "inf", "two"), default="auto",
                    help="working norm for upper bounds")
    sp.add_argument("--per-depth-csv", default=None,
                    help="write the per-depth table to this CSV file")

    sp = sub.add_parser("norm", help="build a truncated extremal norm")
    _add_common(sp)
    sp.add_argument("--rho-hat", type=float, default=None,
                    help="normalization (default: computed jsr upper bound)")
    sp.add_argument("--mode", choices=("monotone", "absolute"), default=MONOTONE)

    sp = sub.add_parser("simulate", help="evolve a jump system along its signal")
    _add_common(sp)
    sp.add_argument("--out", default=None, help="trajectory CSV path (default stdout)")

    sp = sub.add_parser("lipschitz", help="perturbation experiment for the jsr")
    _add_common(sp)
    sp.add_argument("--epsilon", type=float, default=0.05)
    sp.add_argument("--trials", type=int, default=20)
    sp.add_argument("--out-csv", default=None,
                    help="write per-trial (H, delta_mid, ratio) rows to this CSV")

    return p


def _jsr_params(opts, default_depth: int, default_delta) -> JsrParams:
    return JsrParams(
        depth=opts.depth if opts.depth is not None else default_depth,
        delta=opts.delta if opts.delta is not None else default_delta,
        budget=opts.budget,
        norm=getattr(opts, "norm", "auto"),
    )


def _cmd_analyze(spec: ProblemSpec, opts):
    cone, family = spec.cone, spec.family
    members = []
    if family.semantics == JUMP:
        for k, (A, Pi) in enumerate(family.pairs):
            members.append({
                "label": family.labels[k],
                "projection_cone_preserving": bool(is_cone_preserving(Pi, cone)),
                "flow_cross_positive": bool(is_cross_positive(A, cone)),
            })
    else:
        for k, A in enumerate(family.matrices):
            entry = {
                "label": family.labels[k],
                "cone_preserving": bool(is_cone_preserving(A, cone)),
                "k_positive": bool(is_K_positive(A, cone)),
                "cross_positive": bool(is_cross_positive(A, cone)),
            }
            if family.semantics == CONTINUOUS:
                verdict, _ = is_exp_K_positive(A, cone)
                entry["exp_k_positive"] = verdict
            members.append(entry)
    rep = family_irreducible(family, cone)
    irr = {
        "verdict": rep.verdict,
        "method": rep.method,
        "face_witnesses": [
            {"active_facets": list(face), "moved_by": key}
            for face, key in rep.face_witnesses.items()
        ],
        "invariant_face": (
            None if rep.invariant_face is None
            else {
                "active_facets": list(rep.invariant_face.active_facets),
                "generators": list(rep.invariant_face.generator_ids),
            }
        ),
        "heuristic": rep.cross_checks.get("heuristic", False),
    }
    report = {
        "cone": {"kind": cone.kind, "dim": cone.dim},
        "semantics": family.semantics,
        "members": members,
        "irreducibility": irr,
    }
    return report, EXIT_OK


def _cmd_jsr(spec: ProblemSpec, opts):
    params = _jsr_params(opts, default_depth=40, default_delta=0.02)
    bounds = jsr_bounds(spec.family, spec.cone, params)
    report = {
        "semantics": bounds.semantics,
        "lower": bounds.lower,
        "upper": bounds.upper,
        "width": bounds.width,
        "depth": bounds.depth,
        "delta": bounds.delta,
        "norm": bounds.norm_used,
        "witness": list(bounds.lower_witness),
        "nodes": bounds.nodes,
        "incomplete": bounds.incomplete,
        "heuristic_upper": bounds.heuristic_upper,
        "per_depth": [list(row) for row in bounds.per_depth],
    }
    if opts.per_depth_csv:
        lines = ["t,max_norm_avg,max_specrad_avg"]
        lines += [f"{t},{n:.17g},{r:.17g}" for t, n, r in bounds.per_depth]
        with open(opts.per_depth_csv, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
    return report, (EXIT_BUDGET if bounds.incomplete else EXIT_OK)


def _cmd_norm(spec: ProblemSpec, opts):
    cone, family = spec.cone, spec.family
    if family.semantics == JUMP:
        raise ValidationError("norm construction needs a discrete or continuous system")
    sampled = family.semantics == CONTINUOUS
    if sampled:
        from .semigroup import discrete_family

        work = discrete_family([matrix_exponential(A, 1.0) for A in family.matrices])
    else:
        work = family
    rho_hat = opts.rho_hat
    jsr_report = None
    if rho_hat is None:
        bounds = jsr_bounds(work, cone, JsrParams(depth=20, delta=0.02, budget=opts.budget))
        rho_hat = bounds.upper
        jsr_report = {"lower": bounds.lower, "upper": bounds.upper}
    depth = opts.depth if opts.depth is not None else 6
    v = build_extremal_norm(work, cone, rho_hat=rho_hat, depth=depth,
                            mode=opts.mode, budget=opts.budget)
    residual = extremality_residual(v, work, rng=opts.seed)
    if cone.dim <= 3:
        ecc = eccentricity(v, base_monotone_norm(cone), method="vertex")
    else:
        ecc = eccentricity(v, base_monotone_norm(cone), method="sampling", rng=opts.seed)
    report = v.export()
    report.update({
        "sampled_continuous": sampled,
        "residual": residual.residual,
        "residual_member": residual.member,
        "eccentricity": ecc,
        "positive": bool(norm_positivity(v)),
    })
    if jsr_report is not None:
        report["jsr"] = jsr_report
    return report, EXIT_OK


def _cmd_simulate(spec: ProblemSpec, opts):
    cone, family = spec.cone, spec.family
    if spec.signal is None:
        raise ValidationError("simulate needs a signal section in the problem document")
    if family.semantics == DISCRETE:
        raise ValidationError("simulate needs a continuous or jump system")
    if family.semantics == CONTINUOUS:
        eye = np.eye(family.dim)
        family = validate_jump_family([(A, eye) for A in family.matrices],
                                      labels=list(family.labels))
    x0 = spec.x0 if spec.x0 is not None else cone.interior_point()
    rows = [(0.0, x0)]
    for i in range(1, len(spec.signal) + 1):
        word = evolve_jump(family, spec.signal[:i])
        rows.append((word.t, word.matrix @ x0))
    header = "t," + ",".join(f"x_{i + 1}" for i in range(family.dim))
    lines = [header]
    for t, x in rows:
        lines.append(f"{t:.17g}," + ",".join(f"{v:.17g}" for v in x))
    csv_text = "\n".join(lines) + "\n"
    report = {
        "rows": len(rows),
        "t_final": rows[-1][0],
        "final_state": rows[-1][1].tolist(),
        "csv": csv_text,
    }
    return report, EXIT_OK


def _cmd_lipschitz(spec: ProblemSpec, opts):
    params = _jsr_params(opts, default_depth=10, default_delta=None)
    rep = lipschitz_experiment(
        spec.family, spec.cone, epsilon=opts.epsilon, trials=opts.trials,
        jsr_params=params, rng=opts.seed, threads=opts.threads,
    )
    report = {
        "trials": rep.trials,
        "epsilon": rep.perturbation_scale,
        "max_ratio": rep.max_ratio,
        "ecc_bound": rep.ecc_bound,
        "inequality_violations": rep.inequality_violations,
        "skipped": rep.skipped,
        "outside": rep.outside_count,
        "ratios": list(rep.ratios),
        "base": {"lower": rep.base_lower, "upper": rep.base_upper},
        "records": [
            {
                "hausdorff": r.hausdorff,
                "mid_delta": r.mid_delta,
                "ratio": r.ratio,
                "violation": r.violation,
                "outside": r.outside,
            }
            for r in rep.records
        ],
    }
    if opts.out_csv:
        lines = ["hausdorff,delta_mid,ratio"]
        for r in rep.records:
            ratio = "" if math.isnan(r.ratio) else f"{r.ratio:.17g}"
            lines.append(f"{r.hausdorff:.17g},{r.mid_delta:.17g},{ratio}")
        with open(opts.out_csv, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
    return report, EXIT_OK


_COMMANDS = {
    "analyze": _cmd_analyze,
    "jsr": _cmd_jsr,
    "norm": _cmd_norm,
    "simulate": _cmd_simulate,
    "lipschitz": _cmd_lipschitz,
}


def run_command(command: str, spec: ProblemSpec, opts):
    """Dispatch a subcommand; returns (report dict, exit code)."""
    return _COMMANDS[command](spec, opts)


def main(argv=None) -> int:
    opts = build_parser().parse_args(argv)
    try:
        with open(opts.problem, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(json.dumps({"error": {"type": "IOError", "message": str(exc)}}))
        return EXIT_ERROR
    try:
        spec = parse_problem(text, tol=opts.tol)
        report, code = run_command(opts.command, spec, opts)
    except BudgetExceeded as exc:
        print(json.dumps({"error": {"type": "BudgetExceeded", "message": str(exc)}}))
        return EXIT_BUDGET
    except ConeJsrError as exc:
        print(json.dumps({"error": {"type": type(exc).__name__, "message": str(exc)}}))
        return EXIT_ERROR
    if opts.command == "simulate":
        csv_text = report.pop("csv")
        if opts.out:
            with open(opts.out, "w", encoding="utf-8") as fh:
                fh.write(csv_text)
            print(json.dumps(_jsonable(report), indent=2))
        else:
            sys.stdout.write(csv_text)
    else:
        print(json.dumps(_jsonable(report), indent=2))
    return code


if __name__ == "__main__":
    sys.exit(main())
