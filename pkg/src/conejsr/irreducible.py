"""Irreducibility of cone-preserving maps and families.

A map is irreducible when it leaves no nontrivial face of the cone
invariant; equivalently it has no eigenvector on the cone boundary, and
equivalently ``(I + A)^(n-1)`` maps every nonzero cone point into the
interior.  The power test is the primary decision procedure here; the
eigenvector test runs alongside and disagreement raises
:class:`~conejsr.errors.ToleranceConflict` instead of guessing.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.optimize

from .cones import (
    BOUNDARY,
    INTERIOR,
    Face,
    PolyhedralCone,
    classify_point,
    compact_base,
    enumerate_faces,
    face_contains,
)
from .errors import (
    FamilyReducible,
    MethodUnavailable,
    NotConePreserving,
    NotCrossPositive,
    PreconditionFailed,
    ToleranceConflict,
)
from .maps import is_cone_preserving, is_cross_positive, matrix_exponential

IRREDUCIBLE = "irreducible"
REDUCIBLE = "reducible"

#: eigenvalues closer than this (relative) are treated as one cluster
_EIG_TOL = 1e-8

#: sample times used by the jump-system face scan
JUMP_SAMPLE_TIMES = (0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0)


@dataclass(frozen=True)
class IrreducibilityReport:
    verdict: str
    method: str
    invariant_face: Face | None = None
    boundary_eigenvector: tuple | None = None  # (vector, eigenvalue)
    face_witnesses: dict = field(default_factory=dict)
    cross_checks: dict = field(default_factory=dict)

    @property
    def irreducible(self) -> bool:
        return self.verdict == IRREDUCIBLE


def real_eigenspaces(A, tol: float = _EIG_TOL):
    """Real eigenvalues with their geometric eigenspaces.

    Returns ``(spaces, skipped)`` where ``spaces`` is a list of
    ``(eigenvalue, basis)`` with orthonormal basis columns and ``skipped``
    counts complex-pair eigenvalues, which cannot carry cone eigenvectors.
    """
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    lams = np.linalg.eigvals(A)
    scale = max(1.0, float(np.abs(lams).max()))
    reals = sorted(float(l.real) for l in lams if abs(l.imag) <= tol * scale)
    skipped = len(lams) - len(reals)
    clusters: list[list[float]] = []
    for lam in reals:
        if clusters and lam - clusters[-1][-1] <= tol * scale:
            clusters[-1].append(lam)
        else:
            clusters.append([lam])
    spaces = []
    for cluster in clusters:
        lam = float(np.mean(cluster))
        _, s, vt = np.linalg.svd(A - lam * np.eye(n))
        null_dim = int(np.sum(s <= tol * max(1.0, s[0])))
        if null_dim == 0:
            null_dim = 1  # defective cluster: keep the best available direction
        spaces.append((lam, vt[n - null_dim:].T.copy()))
    return spaces, skipped


def _subspace_meets_cone(V, cone: PolyhedralCone) -> np.ndarray | None:
    """A nonzero cone point inside ``span(V)``, or ``None``.

    Solved as a linear feasibility problem normalised by the base
    functional, which is exact for polyhedral cones.
    """
    phi = cone.facet_normals.sum(axis=0)
    A_ub = -(cone.unit_normals @ V)
    res = scipy.optimize.linprog(
        np.zeros(V.shape[1]),
        A_ub=A_ub,
        b_ub=np.zeros(A_ub.shape[0]),
        A_eq=(phi @ V).reshape(1, -1),
        b_eq=[1.0],
        bounds=[(None, None)] * V.shape[1],
    )
    if res.status != 0:
        return None
    return V @ res.x


def _march_to_boundary(x, V, cone: PolyhedralCone) -> np.ndarray:
    """Walk from an interior cone point within ``span(V)`` to the boundary."""
    x = x / np.linalg.norm(x)
    for col in range(V.shape[1]):
        d = V[:, col] - (V[:, col] @ x) * x
        if np.linalg.norm(d) <= 1e-12:
            continue
        d = d / np.linalg.norm(d)
        for direction in (d, -d):
            rates = cone.unit_normals @ direction
            slack = cone.unit_normals @ x
            dec = rates < -1e-14
            if not np.any(dec):
                continue
            step = float((slack[dec] / -rates[dec]).min())
            cand = x + step * direction
            if classify_point(cone, cand).verdict == BOUNDARY:
                return cand / np.linalg.norm(cand)
    return x  # pointed cone: should not happen, fall back to the input


def boundary_eigenvector(A, cone: PolyhedralCone):
    """An eigenvector on the cone boundary, or ``None`` when there is none.

    One-dimensional eigenspaces are classified directly.  For repeated
    eigenvalues the whole eigenspace is intersected with the cone: in a
    pointed cone any nonzero intersection reaches the boundary.
    """
    A = np.asarray(A, dtype=float)
    spaces, _ = real_eigenspaces(A)
    for lam, V in spaces:
        if V.shape[1] == 1:
            for v in (V[:, 0], -V[:, 0]):
                if classify_point(cone, v / np.linalg.norm(v)).verdict == BOUNDARY:
                    return v / np.linalg.norm(v), lam
        else:
            x = _subspace_meets_cone(V, cone)
            if x is None:
                continue
            cls = classify_point(cone, x / np.linalg.norm(x))
            if cls.verdict == BOUNDARY:
                return x / np.linalg.norm(x), lam
            return _march_to_boundary(x, V, cone), lam
    return None


def invariant_faces(A, cone: PolyhedralCone, mode: str = "face") -> list:
    """Nontrivial faces invariant under ``A``.

    ``mode="face"`` tests ``A F subset F`` on the face generators (the
    right notion for cone-preserving maps); ``mode="span"`` tests
    invariance of the face's linear span via the projector residual
    ``||(I - P) A P||``, the right notion for cross-positive maps.
    """
    A = np.asarray(A, dtype=float)
    n = cone.dim
    out = []
    scale = max(1.0, float(np.linalg.norm(A, 2)))
    for f in enumerate_faces(cone):
        if mode == "face":
            if all(face_contains(cone, f, A @ cone.generators[i]) for i in f.generator_ids):
                out.append(f)
        elif mode == "span":
            P = f.span_basis @ f.span_basis.T
            resid = np.linalg.norm((np.eye(n) - P) @ A @ P, 2)
            if resid <= cone.tol * scale:
                out.append(f)
        else:
            raise MethodUnavailable(f"unknown invariance mode {mode!r}")
    return out


def is_irreducible_single(A, cone: PolyhedralCone) -> IrreducibilityReport:
    """Irreducibility certificate for one cone-preserving matrix.

    Primary test: ``(I + A)^(n-1)`` maps every generator into the
    interior.  The boundary-eigenvector test and the same power test on
    base points run as cross-checks; disagreement between the primary and
    the eigenvector route raises :class:`ToleranceConflict`.
    """
    A = np.asarray(A, dtype=float)
    cp = is_cone_preserving(A, cone)
    if not cp:
        raise NotConePreserving(f"matrix is not cone preserving: {cp.witness}")
    n = cone.dim
    B = np.linalg.matrix_power(np.eye(n) + A, n - 1)
    power_ok = all(
        classify_point(cone, B @ g).verdict == INTERIOR for g in cone.generators
    )
    phi = compact_base(cone)
    base_ok = all(
        classify_point(cone, B @ (g / (phi @ g))).verdict == INTERIOR
        for g in cone.generators
    )
    bev = boundary_eigenvector(A, cone)
    eig_ok = bev is None
    _, skipped = real_eigenspaces(A)
    if eig_ok != power_ok:
        raise ToleranceConflict(
            f"power test says {'irreducible' if power_ok else 'reducible'} "
            f"but eigenvector test says {'irreducible' if eig_ok else 'reducible'}"
        )
    checks = {
        "power_interior": power_ok,
        "boundary_eigenvector": eig_ok,
        "base_points_interior": base_ok,
        "skipped_complex_eigenvalues": skipped,
    }
    if power_ok:
        return IrreducibilityReport(IRREDUCIBLE, "power_interior", cross_checks=checks)
    inv = invariant_faces(A, cone, mode="face")
    if not inv:
        raise ToleranceConflict("reducible by the power test but no invariant face found")
    return IrreducibilityReport(
        REDUCIBLE,
        "power_interior",
        invariant_face=inv[0],
        boundary_eigenvector=bev,
        cross_checks=checks,
    )


def exp_irreducible(A, cone: PolyhedralCone) -> IrreducibilityReport:
    """Irreducibility of the flow ``exp(A t)`` for a cross-positive matrix.

    Decided through two equivalent conditions: no eigenvector of ``A`` on
    the cone boundary, and no nontrivial face whose span is invariant.
    Both are evaluated; disagreement raises :class:`ToleranceConflict`.
    """
    A = np.asarray(A, dtype=float)
    xp = is_cross_positive(A, cone)
    if not xp:
        raise NotCrossPositive(f"matrix is not cross-positive: {xp.witness}")
    bev = boundary_eigenvector(A, cone)
    spans = invariant_faces(A, cone, mode="span")
    eig_ok = bev is None
    span_ok = len(spans) == 0
    if eig_ok != span_ok:
        raise ToleranceConflict(
            f"eigenvector test says {'irreducible' if eig_ok else 'reducible'} "
            f"but invariant-span scan says {'irreducible' if span_ok else 'reducible'}"
        )
    checks = {"no_boundary_eigenvector": eig_ok, "no_invariant_span": span_ok}
    if eig_ok:
        return IrreducibilityReport(IRREDUCIBLE, "spectral_face_agreement", cross_checks=checks)
    return IrreducibilityReport(
        REDUCIBLE,
        "spectral_face_agreement",
        invariant_face=spans[0],
        boundary_eigenvector=bev,
        cross_checks=checks,
    )


def _face_invariant_under(A, face: Face, cone: PolyhedralCone) -> bool:
    return all(face_contains(cone, face, A @ cone.generators[i]) for i in face.generator_ids)


def _span_invariant_under(A, face: Face, cone: PolyhedralCone) -> bool:
    n = cone.dim
    P = face.span_basis @ face.span_basis.T
    resid = np.linalg.norm((np.eye(n) - P) @ A @ P, 2)
    return resid <= cone.tol * max(1.0, float(np.linalg.norm(A, 2)))


def family_irreducible(family, cone: PolyhedralCone) -> IrreducibilityReport:
    """Irreducibility of a family: every nontrivial face must be moved by some member.

    Discrete families use the face test on cone-preserving members;
    continuous families use the invariant-span test on cross-positive
    members.  Jump systems are handled by scanning sampled flow-projection
    products together with the projections themselves; this sampling is a
    heuristic and is flagged as such in ``cross_checks``.
    """
    faces = enumerate_faces(cone)
    sem = family.semantics
    if sem == "discrete":
        for k, A in enumerate(family.matrices):
            if not is_cone_preserving(A, cone):
                raise PreconditionFailed(f"member {k} is not cone preserving")
        members = list(enumerate(family.matrices))
        invariant = _face_invariant_under
    elif sem == "continuous":
        for k, A in enumerate(family.matrices):
            if not is_cross_positive(A, cone):
                raise PreconditionFailed(f"member {k} is not cross-positive")
        members = list(enumerate(family.matrices))
        invariant = _span_invariant_under
    elif sem == "jump":
        members = []
        for k, (A, Pi) in enumerate(family.pairs):
            if not is_cone_preserving(Pi, cone):
                raise PreconditionFailed(f"projection of pair {k} is not cone preserving")
            members.append(({"projection": k}, Pi))
            for h in JUMP_SAMPLE_TIMES:
                members.append(({"pair": k, "time": h}, matrix_exponential(A, h) @ Pi))
        invariant = _face_invariant_under
    else:
        raise MethodUnavailable(f"unknown semantics {sem!r}")

    witnesses = {}
    stuck = None
    for f in faces:
        hit = None
        for key, A in members:
            if not invariant(A, f, cone):
                hit = key
                break
        if hit is None:
            stuck = f
            break
        witnesses[f.active_facets] = hit
    checks = {"semantics": sem, "faces_scanned": len(faces), "heuristic": sem == "jump"}
    if sem == "jump":
        checks["sample_times"] = list(JUMP_SAMPLE_TIMES)
    if stuck is not None:
        return IrreducibilityReport(
            REDUCIBLE, "face_scan", invariant_face=stuck,
            face_witnesses=witnesses, cross_checks=checks,
        )
    return IrreducibilityReport(
        IRREDUCIBLE, "face_scan", face_witnesses=witnesses, cross_checks=checks,
    )


def convex_irreducible_witness(family, cone: PolyhedralCone):
    """Uniform average of an irreducible family, with its own certificate.

    For a family moving every face, the average moves every face as well,
    so the returned matrix is irreducible whenever the family is.
    """
    if family.semantics == "jump":
        raise MethodUnavailable("convex witnesses are defined for discrete and continuous families")
    rep = family_irreducible(family, cone)
    if not rep.irreducible:
        raise FamilyReducible(f"family leaves face {rep.invariant_face.active_facets} invariant")
    abar = np.mean(np.stack(family.matrices), axis=0)
    if family.semantics == "discrete":
        single = is_irreducible_single(abar, cone)
    else:
        single = exp_irreducible(abar, cone)
    return abar, single
