"""Hausdorff distance between matrix families and Lipschitz experiments.

The joint spectral radius is locally Lipschitz near irreducible
cone-preserving families; the experiment perturbs a family inside the
cone-preserving set, recomputes certified bounds, and compares the
observed variation against the eccentricity constant of the family's
extremal norm.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .cones import PolyhedralCone
from .errors import (
    BadParams,
    DimensionMismatch,
    FamilyReducible,
    PerturbationEscapes,
    PreconditionFailed,
)
from .irreducible import family_irreducible
from .jsr import JsrParams, jsr_bounds
from .maps import clip_to_cone_preserving, is_cone_preserving, is_cross_positive, is_K_positive
from .norms import base_monotone_norm, build_extremal_norm, eccentricity
from .semigroup import CONTINUOUS, DISCRETE, MatrixFamily, discrete_family

_MATRIX_NORMS = {
    "spectral": lambda A: float(np.linalg.norm(A, 2)),
    "inf": lambda A: float(np.abs(A).sum(axis=1).max()),
    "fro": lambda A: float(np.linalg.norm(A)),
}


def _norm_fun(norm):
    if callable(norm):
        return norm
    if hasattr(norm, "matrix_norm"):
        return norm.matrix_norm
    try:
        return _MATRIX_NORMS[norm]
    except KeyError:
        raise BadParams(f"unknown matrix norm {norm!r}") from None


def hausdorff_distance(M, N, norm="spectral") -> float:
    """Hausdorff distance between two finite matrix sets.

    Exact for finite sets: the larger of the two directed max-min
    distances under the given matrix norm.
    """
    M = [np.asarray(A, dtype=float) for A in M]
    N = [np.asarray(B, dtype=float) for B in N]
    if not M or not N:
        raise DimensionMismatch("both families must be nonempty")
    shape = M[0].shape
    if any(A.shape != shape for A in M + N):
        raise DimensionMismatch("families must share one square shape")
    dist = _norm_fun(norm)
    table = np.array([[dist(A - B) for B in N] for A in M])
    return float(max(table.min(axis=1).max(), table.min(axis=0).max()))


def _repair_cross_positive(A: np.ndarray, cone: PolyhedralCone) -> np.ndarray:
    """Minimal rank-one shift restoring cross-positivity."""
    centre = cone.generators.sum(axis=0)
    phi = cone.facet_normals.sum(axis=0)
    slack = cone.facet_normals @ A @ cone.generators.T
    gain = np.outer(cone.facet_normals @ centre, cone.generators @ phi)
    zero = cone.incidence
    if not zero.any():
        return A
    t = max(0.0, float((-slack[zero] / gain[zero]).max()))
    if t == 0.0:
        return A
    return A + t * np.outer(centre, phi)


@dataclass(frozen=True)
class TrialRecord:
    hausdorff: float
    mid_delta: float
    ratio: float  # nan when the interval-width guard suppressed it
    width_sum: float
    violation: bool
    outside: bool


@dataclass(frozen=True)
class LipschitzReport:
    trials: int
    perturbation_scale: float
    ratios: tuple
    max_ratio: float
    ecc_bound: float
    inequality_violations: int
    records: tuple
    skipped: int
    outside_count: int
    base_lower: float
    base_upper: float


def _resolve_threads(threads) -> int:
    if threads is not None:
        return max(1, int(threads))
    env = os.environ.get("CONEJSR_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1


def lipschitz_experiment(family, cone: PolyhedralCone, epsilon: float = 0.05,
                         trials: int = 20, jsr_params: JsrParams | None = None,
                         norm_depth: int = 4, rng=None, threads=None,
                         allow_outside: bool = False,
                         kpositive: bool = False) -> LipschitzReport:
    """Empirical Lipschitz study of the joint spectral radius.

    Each trial perturbs every member by a random matrix of norm at most
    ``epsilon``, repairs it back into the cone-preserving set by the
    minimal rank-one clip, recomputes bounds, and tests the one-sided
    inequality ``upper_N <= upper_M + C * H + widths`` where ``C`` is the
    eccentricity of the family's extremal norm and ``H`` the Hausdorff
    distance in the base-gauge operator norm.  Ratios are only formed
    when ``H`` exceeds ten times the combined interval widths, and are
    shrunk by the half-widths so certification noise never inflates them.
    With ``allow_outside`` perturbations skip the repair; those trials
    are tallied separately and make no inequality claims.
    """
    if not isinstance(family, MatrixFamily):
        family = discrete_family(family)
    if family.semantics not in (DISCRETE, CONTINUOUS):
        raise BadParams("the experiment covers discrete and continuous families")
    if epsilon <= 0:
        raise BadParams("epsilon must be positive")
    if kpositive:
        for k, A in enumerate(family.matrices):
            if not is_K_positive(A, cone).ok:
                raise PreconditionFailed(f"member {k} is not K-positive")
    else:
        rep = family_irreducible(family, cone)
        if not rep.irreducible:
            face = rep.invariant_face.active_facets if rep.invariant_face else ()
            raise FamilyReducible(f"family leaves face {face} invariant")

    params = jsr_params or JsrParams(depth=10, delta=None)
    bounds_m = jsr_bounds(family, cone, params)
    base = base_monotone_norm(cone)
    if family.semantics == DISCRETE:
        norm_source = family
    else:
        from .maps import matrix_exponential

        norm_source = discrete_family(
            [matrix_exponential(A, params.step) for A in family.matrices]
        )
        for k, A in enumerate(family.matrices):
            if not is_cross_positive(A, cone).ok:
                raise PreconditionFailed(f"member {k} is not cross-positive")
    rho_ref = max(bounds_m.upper, 1e-12)
    v = build_extremal_norm(norm_source, cone, rho_hat=rho_ref, depth=norm_depth)
    if cone.dim <= 3:
        ecc = eccentricity(v, base, method="vertex")
    else:
        ecc = eccentricity(v, base, method="sampling", rng=0)

    width_m = bounds_m.width
    mid_m = 0.5 * (bounds_m.lower + bounds_m.upper)
    slack = 1e-9 * max(1.0, bounds_m.upper)

    def run_trial(seed) -> TrialRecord:
        rng_t = np.random.default_rng(seed)
        perturbed = []
        outside = False
        for A in family.matrices:
            E = rng_t.normal(size=A.shape)
            E *= (epsilon * rng_t.uniform(0.1, 1.0)) / max(np.linalg.norm(E, 2), 1e-300)
            B = A + E
            if family.semantics == DISCRETE:
                if not is_cone_preserving(B, cone).ok:
                    if allow_outside:
                        outside = True
                    else:
                        B = clip_to_cone_preserving(B, cone)
                        if not is_cone_preserving(B, cone).ok:
                            raise PerturbationEscapes(
                                "rank-one clip failed to restore cone preservation"
                            )
            else:
                if not is_cross_positive(B, cone).ok:
                    if allow_outside:
                        outside = True
                    else:
                        B = _repair_cross_positive(B, cone)
                        if not is_cross_positive(B, cone).ok:
                            raise PerturbationEscapes(
                                "rank-one clip failed to restore cross-positivity"
                            )
            perturbed.append(B)
        fam_n = MatrixFamily(family.semantics, family.dim, tuple(perturbed))
        bounds_n = jsr_bounds(fam_n, cone, params)
        H = hausdorff_distance(family.matrices, perturbed, norm=base.matrix_norm)
        width_n = bounds_n.width
        widths = width_m + width_n
        mid_n = 0.5 * (bounds_n.lower + bounds_n.upper)
        violation = (not outside) and bounds_n.upper > bounds_m.upper + ecc * H + widths + slack
        ratio = math.nan
        if not outside and H > 10.0 * widths and H > 0:
            ratio = max(0.0, abs(mid_n - mid_m) - 0.5 * widths) / H
        return TrialRecord(H, abs(mid_n - mid_m), ratio, widths, violation, outside)

    seeds = np.random.SeedSequence(rng if isinstance(rng, int) else None).spawn(trials)
    workers = _resolve_threads(threads)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(run_trial, seeds))
    else:
        records = [run_trial(s) for s in seeds]

    ratios = tuple(r.ratio for r in records if math.isfinite(r.ratio))
    return LipschitzReport(
        trials=trials,
        perturbation_scale=epsilon,
        ratios=ratios,
        max_ratio=max(ratios, default=0.0),
        ecc_bound=ecc,
        inequality_violations=sum(r.violation for r in records),
        records=tuple(records),
        skipped=sum(1 for r in records if not math.isfinite(r.ratio) and not r.outside),
        outside_count=sum(r.outside for r in records),
        base_lower=bounds_m.lower,
        base_upper=bounds_m.upper,
    )
