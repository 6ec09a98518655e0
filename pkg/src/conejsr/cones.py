"""Polyhedral proper cones: construction, membership, faces, order and lattice operations.

A cone is kept in a dual representation: a list of generators (extreme
rays) and a list of facet normals ``h_j`` such that the cone is exactly
``{x : h_j . x >= 0 for all j}``.  All classification routines work with a
relative tolerance band around facet hyperplanes, so "boundary" always
means a band of width ``2 * tol * scale`` rather than a measure-zero set.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateBase,
    DimensionLimit,
    DimensionMismatch,
    FaceCapExceeded,
    Inconsistent,
    NotFull,
    NotInterior,
    NotPointed,
    NotSimplicial,
)

DEFAULT_TOL = 1e-9

#: caps for the facet enumeration fallback of :func:`general_cone`
DUAL_ENUM_MAX_DIM = 8
DUAL_ENUM_MAX_GENERATORS = 32

#: default cap for :func:`enumerate_faces`
FACE_CAP = 4096

# point classification verdicts
INTERIOR = "interior"
BOUNDARY = "boundary"
ZERO = "zero"
OUTSIDE = "outside"

# order relations, strongest first
EQUAL = "equal"
GG = "gg"  # x - y interior (strict domination)
GEQ = "geq"
LL = "ll"
LEQ = "leq"
INCOMPARABLE = "incomparable"

ORTHANT = "orthant"
SIMPLICIAL = "simplicial"
GENERAL = "general"


@dataclass(frozen=True)
class PolyhedralCone:
    """Pointed, closed, full polyhedral cone in dual representation.

    ``generators`` has one ray per row, ``facet_normals`` one inward normal
    per row.  ``incidence[i, j]`` is true when generator ``i`` lies on facet
    ``j``.  ``kind`` is one of ``"orthant"``, ``"simplicial"``, ``"general"``.
    """

    dim: int
    generators: np.ndarray
    facet_normals: np.ndarray
    incidence: np.ndarray
    kind: str
    tol: float = DEFAULT_TOL
    # facet normals rescaled to unit length, used for all slack computations
    unit_normals: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        for name in ("generators", "facet_normals", "incidence", "unit_normals"):
            arr = getattr(self, name)
            if arr is not None:
                arr.setflags(write=False)

    @property
    def n_generators(self) -> int:
        return self.generators.shape[0]

    @property
    def n_facets(self) -> int:
        return self.facet_normals.shape[0]

    @property
    def is_lattice(self) -> bool:
        """True when coordinate-wise lattice operations are available."""
        return self.kind in (ORTHANT, SIMPLICIAL)

    def interior_point(self) -> np.ndarray:
        """Sum of generators; strictly inside every facet for a valid cone."""
        return self.generators.sum(axis=0)


@dataclass(frozen=True)
class PointClass:
    """Outcome of :func:`classify_point`.

    ``min_slack`` is the smallest facet slack in units of ``x`` (facet
    normals are normalised to unit length before taking inner products).
    """

    verdict: str
    min_slack: float
    active_facets: tuple


@dataclass(frozen=True)
class Face:
    """A nontrivial face, indexed by its full set of active facets."""

    active_facets: tuple
    generator_ids: tuple
    span_basis: np.ndarray  # orthonormal columns spanning the face
    is_trivial: bool = False

    def __post_init__(self):
        self.span_basis.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.span_basis.shape[1]


def _as_matrix(rows, dim=None, what="input"):
    arr = np.asarray(rows, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2 or arr.size == 0:
        raise Inconsistent(f"{what} must be a nonempty 2-d array")
    if dim is not None and arr.shape[1] != dim:
        raise Inconsistent(f"{what} has width {arr.shape[1]}, expected {dim}")
    if not np.all(np.isfinite(arr)):
        raise Inconsistent(f"{what} contains non-finite entries")
    return arr


def _incidence(generators, facet_normals, tol):
    gnorm = np.maximum(1.0, np.linalg.norm(generators, axis=1))
    fnorm = np.maximum(1.0, np.linalg.norm(facet_normals, axis=1))
    vals = generators @ facet_normals.T
    return np.abs(vals) <= tol * np.outer(gnorm, fnorm)


def _validate(generators, facet_normals, kind, tol):
    """Shared invariant checks; returns the incidence matrix."""
    n = generators.shape[1]
    gnorm = np.linalg.norm(generators, axis=1)
    fnorm = np.linalg.norm(facet_normals, axis=1)
    if np.any(gnorm <= tol):
        raise Inconsistent("zero generator")
    if np.any(fnorm <= tol):
        raise Inconsistent("zero facet normal")

    # pairwise non-parallel generators
    unit = generators / gnorm[:, None]
    gram = unit @ unit.T
    np.fill_diagonal(gram, 0.0)
    if np.any(gram > 1.0 - 1e-12):
        i, j = np.unravel_index(np.argmax(gram), gram.shape)
        raise Inconsistent(f"generators {i} and {j} are parallel")

    # every generator satisfies every facet inequality
    slack = generators @ facet_normals.T
    band = tol * np.outer(np.maximum(1.0, gnorm), np.maximum(1.0, fnorm))
    if np.any(slack < -band):
        i, j = np.unravel_index(np.argmin(slack + band), slack.shape)
        raise Inconsistent(f"generator {i} violates facet {j} (slack {slack[i, j]:.3e})")

    # pointed: facet normals span the whole space
    if np.linalg.matrix_rank(facet_normals, tol=1e-12 * max(1.0, fnorm.max())) < n:
        raise NotPointed("facet normals do not have full rank")

    # full: the generator sum is strictly inside every facet
    centre = generators.sum(axis=0)
    cs = facet_normals @ centre
    if np.any(cs <= tol * np.maximum(1.0, fnorm) * max(1.0, np.linalg.norm(centre))):
        raise NotFull("sum of generators is not interior")

    inc = _incidence(generators, facet_normals, tol)

    # each facet is supported: active generators span a hyperplane
    if kind == GENERAL and n >= 2:
        for j in range(facet_normals.shape[0]):
            act = generators[inc[:, j]]
            if act.shape[0] < n - 1 or np.linalg.matrix_rank(act, tol=1e-12) < n - 1:
                raise Inconsistent(f"facet normal {j} does not support a facet")
    return inc


def orthant(n: int, tol: float = DEFAULT_TOL) -> PolyhedralCone:
    """Nonnegative orthant in dimension ``n``."""
    if n < 1:
        raise Inconsistent("dimension must be at least 1")
    eye = np.eye(n)
    inc = _incidence(eye, eye, tol)
    return PolyhedralCone(n, eye.copy(), eye.copy(), inc, ORTHANT, tol, eye.copy())


def simplicial_cone(basis, tol: float = DEFAULT_TOL) -> PolyhedralCone:
    """Cone generated by ``n`` linearly independent vectors.

    Facet normals are the rows of the inverse of the generator matrix, so
    ``h_j . g_i`` is exactly the Kronecker delta up to rounding.
    """
    gens = _as_matrix(basis, what="basis")
    n = gens.shape[1]
    if gens.shape[0] != n:
        raise NotSimplicial(f"need exactly {n} generators, got {gens.shape[0]}")
    gmat = gens.T  # columns are the generators
    if np.linalg.matrix_rank(gmat, tol=1e-12 * max(1.0, np.abs(gmat).max())) < n:
        raise NotSimplicial("generators are linearly dependent")
    facets = np.linalg.inv(gmat)
    inc = _validate(gens, facets, SIMPLICIAL, tol)
    units = facets / np.linalg.norm(facets, axis=1)[:, None]
    return PolyhedralCone(n, gens, facets, inc, SIMPLICIAL, tol, units)


def _enumerate_facets(gens, tol):
    """Brute-force facet enumeration over (n-1)-subsets of generators."""
    m, n = gens.shape
    if n > DUAL_ENUM_MAX_DIM or m > DUAL_ENUM_MAX_GENERATORS:
        raise DimensionLimit(
            f"facet enumeration supports n <= {DUAL_ENUM_MAX_DIM} and "
            f"m <= {DUAL_ENUM_MAX_GENERATORS}, got n={n}, m={m}"
        )
    if n == 1:
        sign = np.sign(gens[0, 0])
        return np.array([[sign]])
    found = []
    scale = np.maximum(1.0, np.linalg.norm(gens, axis=1))
    for subset in itertools.combinations(range(m), n - 1):
        sub = gens[list(subset)]
        # need a one-dimensional null space: the subset spans a hyperplane
        _, s, vt = np.linalg.svd(sub)
        rank = int(np.sum(s > 1e-10 * max(1.0, s[0])))
        if rank != n - 1:
            continue
        h = vt[-1]
        vals = gens @ h
        band = tol * scale
        if np.all(vals >= -band):
            cand = h
        elif np.all(vals <= band):
            cand = -h
        else:
            continue
        if not any(abs(cand @ f) > 1.0 - 1e-9 for f in found):
            found.append(cand)
    if not found:
        raise NotPointed("no supporting hyperplanes found")
    return np.array(found)


def general_cone(generators, facet_normals=None, tol: float = DEFAULT_TOL) -> PolyhedralCone:
    """Cone from explicit generators, with facet normals given or enumerated.

    When exactly ``n`` independent generators are supplied the result is
    reported as simplicial, which unlocks the lattice operations.
    """
    gens = _as_matrix(generators, what="generators")
    n = gens.shape[1]
    if gens.shape[0] == n and np.linalg.matrix_rank(gens, tol=1e-12) == n and facet_normals is None:
        return simplicial_cone(gens, tol)
    if facet_normals is None:
        facets = _enumerate_facets(gens, tol)
    else:
        facets = _as_matrix(facet_normals, dim=n, what="facet normals")
    kind = GENERAL
    if gens.shape[0] == n and np.linalg.matrix_rank(gens, tol=1e-12) == n:
        kind = SIMPLICIAL
    inc = _validate(gens, facets, kind, tol)
    units = facets / np.linalg.norm(facets, axis=1)[:, None]
    return PolyhedralCone(n, gens, facets, inc, kind, tol, units)


def construct_cone(spec: dict, tol: float = DEFAULT_TOL) -> PolyhedralCone:
    """Build a cone from a dictionary as found in problem documents."""
    kind = spec.get("kind")
    if kind == ORTHANT:
        return orthant(int(spec["dim"]), tol)
    if kind == SIMPLICIAL:
        return simplicial_cone(spec["generators"], tol)
    if kind == GENERAL:
        return general_cone(spec["generators"], spec.get("facets"), tol)
    raise Inconsistent(f"unknown cone kind {kind!r}")


def classify_point(cone: PolyhedralCone, x) -> PointClass:
    """Locate ``x`` relative to the cone: interior, boundary band, zero or outside."""
    x = np.asarray(x, dtype=float)
    if x.shape != (cone.dim,):
        raise DimensionMismatch(f"point has shape {x.shape}, expected ({cone.dim},)")
    nrm = float(np.linalg.norm(x))
    slacks = cone.unit_normals @ x
    min_slack = float(slacks.min())
    band = cone.tol * max(1.0, nrm)
    active = tuple(int(j) for j in np.nonzero(np.abs(slacks) <= band)[0])
    if nrm <= cone.tol:
        return PointClass(ZERO, min_slack, active)
    if min_slack < -band:
        return PointClass(OUTSIDE, min_slack, active)
    if min_slack > band:
        return PointClass(INTERIOR, min_slack, active)
    return PointClass(BOUNDARY, min_slack, active)


def compact_base(cone: PolyhedralCone) -> np.ndarray:
    """Unit functional ``phi`` strictly positive on the cone minus the origin.

    ``{x in K : phi . x = 1}`` is then a compact base; generators are mapped
    onto it by ``g / (phi . g)``.
    """
    phi = cone.facet_normals.sum(axis=0)
    phi = phi / np.linalg.norm(phi)
    vals = cone.generators @ phi
    scale = cone.tol * np.maximum(1.0, np.linalg.norm(cone.generators, axis=1))
    if np.any(vals <= scale):
        i = int(np.argmin(vals))
        raise DegenerateBase(f"base functional vanishes on generator {i}")
    return phi


def base_points(cone: PolyhedralCone, phi=None) -> np.ndarray:
    """Generators rescaled onto the compact base ``{phi . x = 1}``."""
    if phi is None:
        phi = compact_base(cone)
    vals = cone.generators @ phi
    return cone.generators / vals[:, None]


def enumerate_faces(cone: PolyhedralCone, cap: int = FACE_CAP) -> list:
    """All nontrivial faces, sorted by their active-facet index sets.

    Faces are the common-zero sets of facet subsets; they are found as
    intersections of the generators' active-facet sets, which is exact for
    a valid dual representation.
    """
    m = cone.n_generators
    active = [frozenset(np.nonzero(cone.incidence[i])[0]) for i in range(m)]
    sets = {a for a in active if a}
    frontier = set(sets)
    while frontier:
        fresh = set()
        for j, a in itertools.product(frontier, active):
            cut = j & a
            if cut and cut not in sets:
                fresh.add(cut)
        sets |= fresh
        if len(sets) > cap:
            raise FaceCapExceeded(f"face count exceeds cap {cap}")
        frontier = fresh
    faces = []
    for j_set in sets:
        ids = tuple(i for i in range(m) if j_set <= active[i])
        if not ids:
            continue
        gens = cone.generators[list(ids)]
        u, s, _ = np.linalg.svd(gens.T, full_matrices=False)
        rank = int(np.sum(s > 1e-12 * max(1.0, s[0])))
        faces.append(Face(tuple(int(j) for j in sorted(j_set)), ids, u[:, :rank].copy()))
    faces.sort(key=lambda f: (len(f.active_facets), f.active_facets))
    return faces


def face_contains(cone: PolyhedralCone, face: Face, x) -> bool:
    """Membership test for a face: in the cone and on all its active facets."""
    cls = classify_point(cone, x)
    if cls.verdict == OUTSIDE:
        return False
    if cls.verdict == ZERO:
        return True
    band = cone.tol * max(1.0, float(np.linalg.norm(x)))
    slacks = cone.unit_normals[list(face.active_facets)] @ np.asarray(x, dtype=float)
    return bool(np.all(np.abs(slacks) <= band))


def order_compare(cone: PolyhedralCone, x, y) -> str:
    """Strongest cone-order relation between ``x`` and ``y``.

    Returns one of ``"equal"``, ``"gg"`` (x - y interior), ``"geq"``,
    ``"ll"``, ``"leq"``, ``"incomparable"``.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    d = x - y
    fwd = classify_point(cone, d)
    if fwd.verdict == ZERO:
        return EQUAL
    if fwd.verdict == INTERIOR:
        return GG
    if fwd.verdict == BOUNDARY:
        return GEQ
    bwd = classify_point(cone, -d)
    if bwd.verdict == INTERIOR:
        return LL
    if bwd.verdict == BOUNDARY:
        return LEQ
    return INCOMPARABLE


def _coords(cone: PolyhedralCone, x):
    if not cone.is_lattice:
        raise NotSimplicial(f"lattice operations need a simplicial cone, got kind={cone.kind!r}")
    return np.linalg.solve(cone.generators.T, np.asarray(x, dtype=float))


def lattice_abs(cone: PolyhedralCone, x) -> np.ndarray:
    """Lattice absolute value: generator coordinates of ``x`` made nonnegative."""
    x = np.asarray(x, dtype=float)
    if x.shape != (cone.dim,):
        raise DimensionMismatch(f"point has shape {x.shape}, expected ({cone.dim},)")
    if cone.kind == ORTHANT:
        return np.abs(x)
    lam = _coords(cone, x)
    return cone.generators.T @ np.abs(lam)


def lattice_max(cone: PolyhedralCone, x, y) -> np.ndarray:
    """Lattice join: coordinate-wise maximum in the generator basis."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if cone.kind == ORTHANT:
        return np.maximum(x, y)
    lx = _coords(cone, x)
    ly = _coords(cone, y)
    return cone.generators.T @ np.maximum(lx, ly)


def uniform_domination_delta(cone: PolyhedralCone, points) -> float:
    """Largest ``delta`` with ``delta * x << y`` for all base ``x`` and ``y`` in ``points``.

    The base used here is ``{x in K : sum_j h_j . x = 1}``, whose extreme
    points are the rescaled generators, so the facet-wise maxima are exact.
    Every ``delta`` strictly below the returned value dominates uniformly.
    """
    pts = _as_matrix(points, dim=cone.dim, what="points")
    for k, y in enumerate(pts):
        if classify_point(cone, y).verdict != INTERIOR:
            raise NotInterior(f"point {k} is not interior")
    phi = cone.facet_normals.sum(axis=0)
    bvals = cone.generators @ phi
    bpts = cone.generators / bvals[:, None]
    # per facet: worst value over the base, attained at a rescaled generator
    denom = (bpts @ cone.facet_normals.T).max(axis=0)
    ratios = (pts @ cone.facet_normals.T) / denom[None, :]
    return float(ratios.min())
