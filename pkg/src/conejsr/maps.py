"""Classification of linear maps against a polyhedral cone.

A matrix is cone preserving when it maps the cone into itself, positive
when it maps every nonzero cone point into the interior, and cross
positive when its flow can only leave a facet inward.  For polyhedral
cones each test reduces to finitely many inner products with generators
and facet normals.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .cones import BOUNDARY, INTERIOR, OUTSIDE, PolyhedralCone, classify_point
from .errors import BadParams, DimensionMismatch

#: default sample times for exponential positivity checks
DEFAULT_EXP_TIMES = tuple(2.0 ** k for k in range(-3, 4))

TRUE_ON_SAMPLES = "true_on_samples"
FALSE = "false"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Verdict:
    """Boolean outcome plus a witness for the failing (or extremal) case."""

    ok: bool
    witness: dict | None = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class MapClassification:
    cone_preserving: bool
    k_positive: bool
    cross_positive: bool
    exp_k_positive: str
    witnesses: dict = field(default_factory=dict)


def _check_square(A, cone) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.shape != (cone.dim, cone.dim):
        raise DimensionMismatch(f"matrix has shape {A.shape}, expected ({cone.dim}, {cone.dim})")
    return A


def is_cone_preserving(A, cone: PolyhedralCone) -> Verdict:
    """Check ``A g in K`` for every generator ``g``; sufficient by convexity."""
    A = _check_square(A, cone)
    worst = None
    for i, g in enumerate(cone.generators):
        cls = classify_point(cone, A @ g)
        if worst is None or cls.min_slack < worst[1]:
            worst = (i, cls.min_slack, cls.verdict)
        if cls.verdict == OUTSIDE:
            return Verdict(False, {"generator": i, "min_slack": cls.min_slack})
    return Verdict(True, {"generator": worst[0], "min_slack": worst[1]})


def is_K_positive(A, cone: PolyhedralCone) -> Verdict:
    """Check ``A g`` interior for every generator; equivalent to positivity."""
    A = _check_square(A, cone)
    worst = None
    for i, g in enumerate(cone.generators):
        cls = classify_point(cone, A @ g)
        if worst is None or cls.min_slack < worst[1]:
            worst = (i, cls.min_slack)
        if cls.verdict != INTERIOR:
            return Verdict(False, {"generator": i, "min_slack": cls.min_slack, "verdict": cls.verdict})
    return Verdict(True, {"generator": worst[0], "min_slack": worst[1]})


def is_cross_positive(A, cone: PolyhedralCone) -> Verdict:
    """Finite tangency test on generator/facet incidence pairs.

    For every pair with ``h_j . g_i = 0`` the image must satisfy
    ``h_j . (A g_i) >= 0`` up to the tolerance band.  On the orthant this
    is exactly the Metzler sign pattern test.
    """
    A = _check_square(A, cone)
    worst = None
    for i, g in enumerate(cone.generators):
        img = A @ g
        scale = max(1.0, float(np.linalg.norm(img)))
        facets = np.nonzero(cone.incidence[i])[0]
        if facets.size == 0:
            continue
        vals = cone.unit_normals[facets] @ img
        k = int(np.argmin(vals))
        if worst is None or vals[k] < worst[2]:
            worst = (i, int(facets[k]), float(vals[k]))
        if vals[k] < -cone.tol * scale:
            return Verdict(False, {"generator": i, "facet": int(facets[k]), "value": float(vals[k])})
    if worst is None:
        return Verdict(True, None)
    return Verdict(True, {"generator": worst[0], "facet": worst[1], "value": worst[2]})


def matrix_exponential(A, t: float = 1.0) -> np.ndarray:
    """Matrix exponential ``exp(A t)`` with an overflow guard."""
    A = np.asarray(A, dtype=float)
    t = float(t)
    if t < 0:
        raise BadParams("time must be nonnegative")
    out = scipy.linalg.expm(A * t)
    if not np.all(np.isfinite(out)):
        raise OverflowError(f"exp(A t) overflowed at t={t}")
    return out


def is_exp_K_positive(A, cone: PolyhedralCone, times=None) -> tuple[str, dict]:
    """Sampled test for positivity of the whole flow ``exp(A t)``, ``t > 0``.

    Returns one of ``"true_on_samples"``, ``"false"``, ``"inconclusive"``
    together with supporting detail.  A cross-positivity failure or a
    boundary eigenvector settles the question negatively; agreement on all
    sampled times plus the absence of boundary eigenvectors is reported as
    ``true_on_samples``, never as a proof for all positive times.
    """
    from .irreducible import boundary_eigenvector  # local import breaks the module cycle
    from .errors import ToleranceConflict

    A = _check_square(A, cone)
    cross = is_cross_positive(A, cone)
    if not cross:
        return FALSE, {"reason": "not cross-positive", "witness": cross.witness}
    if times is None:
        times = DEFAULT_EXP_TIMES
    try:
        bev = boundary_eigenvector(A, cone)
    except ToleranceConflict as exc:
        return INCONCLUSIVE, {"reason": str(exc)}
    if bev is not None:
        vec, lam = bev
        return FALSE, {"reason": "boundary eigenvector", "eigenvalue": lam, "eigenvector": vec}
    for t in times:
        pos = is_K_positive(matrix_exponential(A, t), cone)
        if not pos:
            return FALSE, {"reason": "sampled time fails", "time": t, "witness": pos.witness}
    return TRUE_ON_SAMPLES, {"times": list(times)}


def classify_map(A, cone: PolyhedralCone, times=None) -> MapClassification:
    """All four positivity verdicts for one matrix."""
    A = _check_square(A, cone)
    cp = is_cone_preserving(A, cone)
    kp = is_K_positive(A, cone)
    xp = is_cross_positive(A, cone)
    ev, detail = is_exp_K_positive(A, cone, times)
    return MapClassification(
        cone_preserving=bool(cp),
        k_positive=bool(kp),
        cross_positive=bool(xp),
        exp_k_positive=ev,
        witnesses={
            "cone_preserving": cp.witness,
            "k_positive": kp.witness,
            "cross_positive": xp.witness,
            "exp_k_positive": detail,
        },
    )


def clip_to_cone_preserving(A, cone: PolyhedralCone) -> np.ndarray:
    """Smallest rank-one correction making ``A`` cone preserving.

    Adds ``t * (sum of generators) phi^T`` with minimal ``t >= 0``; the
    correction maps the cone into its interior, so a finite ``t`` always
    repairs the matrix.
    """
    A = _check_square(A, cone)
    centre = cone.generators.sum(axis=0)
    phi = cone.facet_normals.sum(axis=0)
    slack = cone.facet_normals @ A @ cone.generators.T  # (f, m)
    gain = np.outer(cone.facet_normals @ centre, cone.generators @ phi)  # (f, m), positive
    t = max(0.0, float((-slack / gain).max()))
    if t == 0.0:
        return A.copy()
    return A + t * np.outer(centre, phi)
