"""Monotone and absolute extremal norm construction and diagnostics.

A cone with reference interior point ``e`` carries the order-interval
gauge ``max_j |h_j . x| / (h_j . e)``, which is monotone for the cone
order.  Pushing its functionals through all normalized semigroup
products up to a depth and keeping the maximal ones yields a polyhedral
approximation of an extremal norm; the extremality residual measures
how far the truncation is from the defining inequality.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
import scipy.optimize

from .cones import PolyhedralCone, classify_point, lattice_abs
from .errors import (
    BadParams,
    MethodUnavailable,
    NotConePreserving,
    NotInterior,
    NotSimplicial,
)
from .maps import Verdict, is_cone_preserving
from .semigroup import (
    DEFAULT_ENUM_BUDGET,
    MatrixFamily,
    discrete_family,
    enumerate_products,
)

MONOTONE = "monotone"
ABSOLUTE = "absolute"

_VERTEX_DIM_MAX = 3


@dataclass(frozen=True)
class BaseNorm:
    """Order-interval gauge ``max_j |h_j . x| / (h_j . e)``.

    ``functionals`` stores the scaled rows ``h_j / (h_j . e)``; on the
    cone the absolute values drop and the gauge is linear on each piece.
    """

    functionals: np.ndarray
    reference: np.ndarray
    cone: PolyhedralCone

    def __post_init__(self):
        object.__setattr__(self, "functionals", np.asarray(self.functionals, dtype=float))
        object.__setattr__(self, "reference", np.asarray(self.reference, dtype=float))
        self.functionals.setflags(write=False)
        self.reference.setflags(write=False)

    def value(self, x) -> float:
        return float(np.abs(self.functionals @ np.asarray(x, dtype=float)).max())

    def values(self, X) -> np.ndarray:
        return np.abs(self.functionals @ np.asarray(X, dtype=float)).max(axis=0)

    def matrix_norm(self, A) -> float:
        """Induced operator norm of ``A``.

        Exact via conjugation when the functional matrix is square
        (lattice cones); otherwise exact vertex enumeration up to
        dimension three.
        """
        A = np.asarray(A, dtype=float)
        W = self.functionals
        if W.shape[0] == W.shape[1]:
            return float(np.abs(W @ A @ np.linalg.inv(W)).sum(axis=1).max())
        verts = _ball_vertices(W)
        return float(max(self.value(A @ v) for v in verts))


def base_monotone_norm(cone: PolyhedralCone, e=None) -> BaseNorm:
    """Monotone gauge of the order interval ``[-e, e]``.

    On the orthant with ``e`` the all-ones vector this is the sup norm.
    """
    if e is None:
        e = cone.generators.sum(axis=0)
    e = np.asarray(e, dtype=float)
    if classify_point(cone, e).verdict != "interior":
        raise NotInterior("gauge reference point must be interior")
    slack = cone.facet_normals @ e
    return BaseNorm(cone.facet_normals / slack[:, None], e, cone)


@dataclass(frozen=True)
class NormApprox:
    """Polyhedral norm ``max_k w_k . x`` on the cone.

    Off the cone, monotone mode re-inserts the absolute values
    (``max_k |w_k . x|``) and absolute mode routes through the lattice
    absolute value, so both extensions stay positively homogeneous and
    convex.
    """

    functionals: np.ndarray
    rho_hat: float
    depth: int
    base: BaseNorm
    mode: str
    cone: PolyhedralCone
    n_base_rows: int = 0

    def __post_init__(self):
        object.__setattr__(self, "functionals", np.asarray(self.functionals, dtype=float))
        self.functionals.setflags(write=False)

    def value(self, x) -> float:
        x = np.asarray(x, dtype=float)
        if self.mode == ABSOLUTE:
            return float((self.functionals @ lattice_abs(self.cone, x)).max())
        return float(np.abs(self.functionals @ x).max())

    def values(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if self.mode == ABSOLUTE:
            cols = np.stack([lattice_abs(self.cone, X[:, i]) for i in range(X.shape[1])], axis=1)
            return (self.functionals @ cols).max(axis=0)
        return np.abs(self.functionals @ X).max(axis=0)

    def matrix_norm(self, A) -> float:
        A = np.asarray(A, dtype=float)
        verts = _ball_vertices(self.functionals)
        return float(max(self.value(A @ v) for v in verts))

    def export(self) -> dict:
        return {
            "rho_hat": self.rho_hat,
            "depth": self.depth,
            "functionals": self.functionals.tolist(),
            "mode": self.mode,
        }


def _dominance_filter(rows: np.ndarray, cone: PolyhedralCone, protected: int,
                      tol: float = 1e-12) -> np.ndarray:
    """Drop functionals dominated in the dual order.

    ``w <= w'`` in the dual order means ``w . g <= w' . g`` on every
    generator, hence ``w`` never attains the maximum on the cone.  The
    first ``protected`` rows (the base table) are always kept so the
    result dominates the base norm everywhere.
    """
    proj = rows @ cone.generators.T
    eps = tol * max(1.0, float(np.abs(proj).max()))
    keep = np.ones(len(rows), dtype=bool)
    for i in range(len(rows)):
        if i < protected or not keep[i]:
            continue
        for j in range(len(rows)):
            if j == i or not keep[j]:
                continue
            if np.all(proj[j] >= proj[i] - eps):
                if j > i and np.all(np.abs(proj[j] - proj[i]) <= eps):
                    continue  # exact duplicates: drop the later copy
                keep[i] = False
                break
    return rows[keep]


def build_extremal_norm(family, cone: PolyhedralCone, rho_hat: float, depth: int,
                        mode: str = MONOTONE, base: BaseNorm | None = None,
                        budget: int = DEFAULT_ENUM_BUDGET) -> NormApprox:
    """Truncated extremal norm from products up to the given depth.

    Collects the base functionals composed with every product
    ``rho_hat**-t S`` for word lengths 0..depth and keeps the maximal
    rows.  With ``rho_hat`` at or above the joint spectral radius the
    truncations stabilize for irreducible families and the residual is
    nonpositive.
    """
    if not isinstance(family, MatrixFamily):
        family = discrete_family(family)
    if family.semantics != "discrete":
        raise BadParams("extremal norm construction works on discrete families")
    if rho_hat <= 0.0:
        raise BadParams("rho_hat must be positive")
    if mode not in (MONOTONE, ABSOLUTE):
        raise BadParams(f"unknown mode {mode!r}")
    if mode == ABSOLUTE and not cone.is_lattice:
        raise NotSimplicial("absolute norms need a lattice (simplicial) cone")
    for k, A in enumerate(family.matrices):
        bad = is_cone_preserving(A, cone)
        if not bad.ok:
            raise NotConePreserving(
                f"family member {k} maps a generator outside the cone"
            )
    if base is None:
        base = base_monotone_norm(cone)
    U = base.functionals
    blocks = [U]
    for word in enumerate_products(family, depth, budget=budget):
        blocks.append(U @ word.matrix / rho_hat ** len(word.word))
    table = _dominance_filter(np.vstack(blocks), cone, protected=U.shape[0])
    return NormApprox(table, float(rho_hat), depth, base, mode, cone,
                      n_base_rows=U.shape[0])


def norm_positivity(norm, tol: float = 1e-9) -> Verdict:
    """Check that the functional table defines a genuine norm.

    ``max_k |w_k . x|`` vanishes on the null space of the table, so the
    table must have full column rank; a unit null vector is returned as
    the witness of failure.
    """
    W = norm.functionals if hasattr(norm, "functionals") else np.asarray(norm, dtype=float)
    W = np.atleast_2d(W)
    _, s, vt = np.linalg.svd(W)
    full = min(W.shape) == W.shape[1] and s[-1] > tol * max(1.0, s[0])
    if full:
        return Verdict(True, None)
    return Verdict(False, vt[-1].copy())


def _cone_samples(cone: PolyhedralCone, count: int, rng) -> np.ndarray:
    """Columns are points of the cone: generators, the centre, random mixes."""
    gens = cone.generators
    weights = rng.exponential(size=(count, gens.shape[0]))
    pts = weights @ gens
    fixed = np.vstack([gens, gens.sum(axis=0, keepdims=True)])
    return np.vstack([fixed, pts]).T


@dataclass(frozen=True)
class ResidualReport:
    residual: float
    member: int
    point: np.ndarray

    def __float__(self) -> float:
        return self.residual


def extremality_residual(norm: NormApprox, family, samples: int = 256,
                         rng=None) -> ResidualReport:
    """Worst sampled violation of ``v(Ax) <= rho_hat * v(x)`` on the cone.

    Nonpositive residual certifies extremality of the truncation with
    respect to ``rho_hat`` on the sample; the argmax member and point
    are reported for inspection.
    """
    if not isinstance(family, MatrixFamily):
        family = discrete_family(family)
    rng = np.random.default_rng(rng)
    X = _cone_samples(norm.cone, samples, rng)
    vx = norm.values(X)
    ok = vx > 0
    X, vx = X[:, ok], vx[ok]
    best, arg = -math.inf, (0, X[:, 0])
    for k, A in enumerate(family.matrices):
        ratios = norm.values(A @ X) / (norm.rho_hat * vx)
        i = int(np.argmax(ratios))
        if ratios[i] - 1.0 > best:
            best, arg = float(ratios[i] - 1.0), (k, X[:, i].copy())
    return ResidualReport(best, arg[0], arg[1])


def _ball_vertices(W: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Vertices of the symmetric polytope ``{x : |w_k . x| <= 1}``."""
    W = np.atleast_2d(np.asarray(W, dtype=float))
    k, n = W.shape
    if n > _VERTEX_DIM_MAX:
        raise MethodUnavailable(
            f"vertex enumeration supports dimension <= {_VERTEX_DIM_MAX}"
        )
    scale = max(1.0, float(np.abs(W).max()))
    verts = []
    seen = set()
    for rows in itertools.combinations(range(k), n):
        sub = W[list(rows)]
        if abs(np.linalg.det(sub)) <= tol * scale ** n:
            continue
        for signs in itertools.product((1.0, -1.0), repeat=n):
            x = np.linalg.solve(sub, np.array(signs))
            if np.abs(W @ x).max() <= 1.0 + 1e-9:
                key = tuple(np.round(x, 9))
                if key not in seen:
                    seen.add(key)
                    verts.append(x)
    if not verts:
        raise MethodUnavailable("norm ball has no vertices; table is degenerate")
    return np.array(verts)


def _min_on_sphere(vnorm, base: BaseNorm) -> float:
    """Exact minimum of ``vnorm`` over the base unit sphere.

    The sphere is the union of the base-ball facets; on each facet the
    minimum of a polyhedral norm is a linear program.
    """
    U = base.functionals
    Wv = vnorm.functionals if hasattr(vnorm, "functionals") else np.asarray(vnorm)
    k, n = Wv.shape
    best = math.inf
    A_ub = []
    for w in Wv:
        A_ub.append(np.concatenate([w, [-1.0]]))
        A_ub.append(np.concatenate([-w, [-1.0]]))
    for u in U:
        A_ub.append(np.concatenate([u, [0.0]]))
        A_ub.append(np.concatenate([-u, [0.0]]))
    A_ub = np.array(A_ub)
    b_ub = np.concatenate([np.zeros(2 * k), np.ones(2 * U.shape[0])])
    c = np.concatenate([np.zeros(n), [1.0]])
    for j in range(U.shape[0]):
        for s in (1.0, -1.0):
            A_eq = np.concatenate([s * U[j], [0.0]])[None, :]
            res = scipy.optimize.linprog(
                c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=[1.0],
                bounds=[(None, None)] * n + [(0.0, None)], method="highs",
            )
            if res.status == 0 and res.fun < best:
                best = float(res.fun)
    if not math.isfinite(best):
        raise MethodUnavailable("no base-ball facet admitted a minimizer")
    return best


def eccentricity(vnorm, base: BaseNorm | None = None, method: str = "vertex",
                 samples: int = 4096, rng=None) -> float:
    """Ratio of max to min of one norm over the other's unit sphere.

    The vertex method is exact for polyhedral norms up to dimension
    three: the maximum of a convex function over the base ball sits at a
    ball vertex, the minimum over the sphere is a per-facet linear
    program.  Sampling gives a lower estimate in any dimension.
    """
    if base is None:
        base = vnorm.base
    if method == "vertex":
        verts = _ball_vertices(base.functionals)
        vmax = max(vnorm.value(v) for v in verts)
        vmin = _min_on_sphere(vnorm, base)
        if vmin <= 0.0:
            return math.inf
        return float(vmax / vmin)
    if method == "sampling":
        rng = np.random.default_rng(rng)
        n = base.functionals.shape[1]
        X = rng.normal(size=(n, samples))
        bx = base.values(X)
        good = bx > 0
        ratios = vnorm.values(X[:, good]) / bx[good]
        lo = float(ratios.min())
        if lo <= 0.0:
            return math.inf
        return float(ratios.max() / lo)
    raise BadParams(f"unknown eccentricity method {method!r}")


def induced_matrix_norm(A, vnorm) -> float:
    """Operator norm of ``A`` induced by a polyhedral norm (exact, n <= 3)."""
    return vnorm.matrix_norm(A)


def _spectral_norm(A: np.ndarray) -> float:
    if A.shape == (2, 2):
        f2 = float((A * A).sum())
        det = A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0]
        inner = max(f2 * f2 - 4.0 * det * det, 0.0)
        return math.sqrt(max((f2 + math.sqrt(inner)) / 2.0, 0.0))
    return float(np.linalg.norm(A, 2))


@dataclass(frozen=True)
class BoundednessReport:
    max_norm: float
    growth_flag: bool
    amplification: dict
    running_max: tuple
    spectral_statistic: float
    depth: int


def boundedness_diagnostic(family, cone: PolyhedralCone, rho_hat: float,
                           depth: int, growth_factor: float = 10.0,
                           spectral_margin: float = 0.02,
                           budget: int = DEFAULT_ENUM_BUDGET) -> BoundednessReport:
    """Product boundedness scan of the family normalized by ``rho_hat``.

    An irreducible family with joint spectral radius at most ``rho_hat``
    has bounded normalized products, so either sustained norm growth
    (running max up more than ``growth_factor`` between half and full
    depth) or a normalized product with spectral radius average above
    ``1 + spectral_margin`` flags an underestimated ``rho_hat``.  The
    amplification report evaluates the contradiction detector
    ``eta_n (I + Abar)^(n-1) S`` at a base point: domination ratios
    above one alongside growth certify unboundedness.
    """
    from .irreducible import convex_irreducible_witness
    from .jsr import domination_lower_bound, spectral_radius

    if not isinstance(family, MatrixFamily):
        family = discrete_family(family)
    if rho_hat <= 0.0:
        raise BadParams("rho_hat must be positive")
    abar, _ = convex_irreducible_witness(family, cone)  # FamilyReducible if none
    n = family.dim
    hat = discrete_family([np.asarray(A, float) / rho_hat for A in family.matrices])
    eta = 2.0 ** (-(n - 1))
    amplifier = eta * np.linalg.matrix_power(
        np.eye(n) + abar / rho_hat, n - 1
    )
    b = cone.interior_point()
    running = np.zeros(depth + 1)
    spec_stat = 0.0
    amp_max, amp_exceed, amp_wit = -math.inf, 0, ()
    max_norm = 0.0
    for word in enumerate_products(hat, depth, budget=budget):
        t = len(word.word)
        nrm = _spectral_norm(word.matrix)
        max_norm = max(max_norm, nrm)
        running[t] = max(running[t], nrm)
        spec_stat = max(spec_stat, spectral_radius(word.matrix) ** (1.0 / t))
        gamma = domination_lower_bound(amplifier @ word.matrix, cone, b)
        if gamma > amp_max:
            amp_max, amp_wit = gamma, word.word
        if gamma > 1.0:
            amp_exceed += 1
    for t in range(1, depth + 1):
        running[t] = max(running[t], running[t - 1])
    running[0] = max(running[0], 1.0)
    half = running[depth // 2]
    ratio_flag = half > 0 and running[depth] > growth_factor * half
    spectral_flag = spec_stat > 1.0 + spectral_margin
    return BoundednessReport(
        max_norm=max_norm,
        growth_flag=bool(ratio_flag or spectral_flag),
        amplification={
            "eta": eta,
            "max": amp_max,
            "exceeding": amp_exceed,
            "witness": amp_wit,
        },
        running_max=tuple(float(v) for v in running),
        spectral_statistic=spec_stat,
        depth=depth,
    )
