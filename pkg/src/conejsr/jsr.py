"""Joint spectral radius bounds for matrix families.

Lower bounds come from spectral radii of explored products (every
``r(S)^(1/t)`` underestimates the growth rate); upper bounds combine two
certified sources: the maximum product norm over any completely
enumerated depth, and the branch-and-bound bound ``max(lower + delta,
alpha of open branches)`` where ``alpha`` is the smallest prefix norm
average of a word.  Pruned searches therefore stay sound even when
stopped early.

Continuous families are sampled through exponentials on a fixed step;
the resulting lower bounds are genuine, the upper bound is only as good
as the grid and is flagged as heuristic.  The same holds for sampled
jump signals.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace

import numpy as np

from .cones import PolyhedralCone, classify_point
from .errors import BadParams, MethodUnavailable, NotInterior, ViolationFound
from .maps import matrix_exponential
from .semigroup import (
    CONTINUOUS,
    DISCRETE,
    JUMP,
    MatrixFamily,
    ProductWord,
    discrete_family,
    enumerate_products,
)

_SEED_NODE_CAP = 20_000


@dataclass(frozen=True)
class JsrParams:
    """Search configuration.

    ``delta`` is the branch-and-bound slack: subtrees whose best prefix
    norm average cannot beat ``lower + delta`` are cut, and a fully pruned
    search certifies ``upper - lower <= delta``.  ``delta=None`` disables
    pruning and enumerates every word up to ``depth``.  ``step`` is the
    segment duration used to sample continuous and jump semantics.
    """

    depth: int = 40
    delta: float | None = 0.02
    budget: int = 1_000_000
    norm: str = "auto"  # "auto" | "inf" | "two"
    seed_depth: int = 3
    step: float = 1.0


@dataclass(frozen=True)
class JsrBounds:
    lower: float
    upper: float
    depth: int
    lower_witness: tuple
    norm_used: str
    semantics: str
    per_depth: tuple  # rows (t, max norm^(1/t), max specrad^(1/t)) over explored words
    incomplete: bool = False
    heuristic_upper: bool = False
    nodes: int = 0
    delta: float | None = None

    @property
    def width(self) -> float:
        return self.upper - self.lower


def spectral_radius(A) -> float:
    """Largest eigenvalue modulus, with a closed form in dimension two."""
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    if n == 1:
        return abs(float(A[0, 0]))
    if n == 2:
        tr = A[0, 0] + A[1, 1]
        det = A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0]
        disc = tr * tr - 4.0 * det
        if disc >= 0.0:
            s = math.sqrt(disc)
            return max(abs(tr + s), abs(tr - s)) / 2.0
        return math.sqrt(det)
    return float(np.abs(np.linalg.eigvals(A)).max())


def domination_lower_bound(A, cone: PolyhedralCone, x=None) -> float:
    """Spectral radius floor ``min_j (h_j . A x) / (h_j . x)`` at an interior point.

    If ``A x`` dominates ``c x`` in the cone order then the spectral
    radius of a cone-preserving ``A`` is at least ``c``.
    """
    A = np.asarray(A, dtype=float)
    x = cone.interior_point() if x is None else np.asarray(x, dtype=float)
    if classify_point(cone, x).verdict != "interior":
        raise NotInterior("domination bound needs an interior reference point")
    num = cone.facet_normals @ (A @ x)
    den = cone.facet_normals @ x
    return float((num / den).min())


def _inf_norm(A) -> float:
    return float(np.abs(A).sum(axis=1).max())


def _two_norm(A) -> float:
    return float(np.linalg.norm(A, 2))


def _prepare(family: MatrixFamily, cone, norm):
    """Pick the working norm; gauge norms are realised by conjugating the family.

    For a lattice cone the monotone gauge ball is a parallelepiped, so its
    induced operator norm of ``S`` equals the max-row-sum norm of
    ``W S W^-1`` with ``W`` the gauge functional matrix.  Conjugating the
    members once keeps the per-node cost at one max-row-sum.
    """
    mats = [np.asarray(A, dtype=float) for A in family.matrices]
    if norm == "two":
        return mats, _two_norm, "two-operator", None
    if norm == "inf" or cone is None or not cone.is_lattice:
        label = "inf-operator"
        if norm == "auto" and cone is not None and not cone.is_lattice:
            label = "inf-operator (gauge unavailable for general cones)"
        return mats, _inf_norm, label, None
    from .norms import base_monotone_norm

    base = base_monotone_norm(cone)
    W = base.functionals
    Winv = np.linalg.inv(W)
    conj = [W @ A @ Winv for A in mats]
    return conj, _inf_norm, "cone-gauge-operator", (W, Winv)


def _seed_lower(mats, depth, seed_depth, specf):
    """Cheap breadth pass over short words so pruning has a real floor."""
    m = len(mats)
    best, wit = 0.0, (0,)
    p, total = 0, 0
    while p < min(seed_depth, depth) and total + m ** (p + 1) <= _SEED_NODE_CAP:
        p += 1
        total += m ** p
    for t in range(1, p + 1):
        for word in itertools.product(range(m), repeat=t):
            S = mats[word[0]]
            for j in word[1:]:
                S = mats[j] @ S
            val = specf(S) ** (1.0 / t)
            if val > best:
                best, wit = val, word
    return best, wit


def _search(mats, depth, delta, budget, normf, specf, domf, seed_depth):
    """Depth-first branch and bound; all quantities in the caller's scale."""
    m = len(mats)
    ell, wit = (
        _seed_lower(mats, depth, seed_depth, specf)
        if delta is not None
        else (0.0, (0,))
    )
    per_norm: dict = {}
    per_spec: dict = {}
    complete_max = depth
    survivors: list = []
    nodes = 0
    incomplete = False
    stack = [((j,), mats[j], math.inf) for j in reversed(range(m))]
    while stack:
        if nodes >= budget:
            incomplete = True
            shallowest = min(len(w) for w, _, _ in stack)
            complete_max = min(complete_max, shallowest - 1)
            survivors.extend(a for _, _, a in stack)
            break
        word, S, parent_alpha = stack.pop()
        nodes += 1
        t = len(word)
        npow = normf(S) ** (1.0 / t)
        rpow = specf(S) ** (1.0 / t)
        if rpow > ell:
            ell, wit = rpow, word
        if domf is not None:
            c = domf(S)
            if c > 0.0 and c ** (1.0 / t) > ell:
                ell, wit = c ** (1.0 / t), word
        if npow > per_norm.get(t, 0.0):
            per_norm[t] = npow
        if rpow > per_spec.get(t, 0.0):
            per_spec[t] = rpow
        alpha = min(parent_alpha, npow)
        if t == depth:
            survivors.append(alpha)
            continue
        if delta is not None and alpha <= ell + delta:
            complete_max = min(complete_max, t)
            continue
        for j in reversed(range(m)):
            stack.append((word + (j,), mats[j] @ S, alpha))
    fekete = min(
        (per_norm[t] for t in per_norm if t <= complete_max), default=math.inf
    )
    # every infinite product passes through the frontier (depth-capped words,
    # open stack entries, and in pruned mode subtrees covered by ell + delta),
    # so its worst alpha caps the radius
    if delta is None:
        frontier = max(survivors) if survivors else ell
        gap_certified = False
    else:
        frontier = max([ell + delta] + survivors)
        gap_certified = frontier <= ell + delta and not incomplete
    upper = max(min(fekete, frontier), ell)
    return ell, upper, wit, per_norm, per_spec, nodes, incomplete, gap_certified


def _discrete_bounds(family, cone, params, semantics_label=DISCRETE):
    mats, normf, norm_label, conj = _prepare(family, cone, params.norm)
    if params.depth < 1:
        raise BadParams("depth must be at least 1")
    domf = None
    if cone is not None and conj is not None:
        W, Winv = conj
        x0 = cone.interior_point()
        den = cone.facet_normals @ x0
        lead = cone.facet_normals @ Winv
        wx0 = W @ x0
        domf = lambda S: float(((lead @ (S @ wx0)) / den).min())
    elif cone is not None:
        x0 = cone.interior_point()
        den = cone.facet_normals @ x0
        H = cone.facet_normals
        domf = lambda S: float(((H @ (S @ x0)) / den).min())

    scale = max(normf(A) for A in mats)
    if scale <= 0.0:
        zero_rows = tuple((t, 0.0, 0.0) for t in range(1, params.depth + 1))
        return JsrBounds(0.0, 0.0, params.depth, (0,), norm_label, semantics_label,
                         zero_rows, delta=params.delta)
    hat = [A / scale for A in mats]
    delta_hat = None if params.delta is None else params.delta / scale
    ell, upper, wit, per_norm, per_spec, nodes, incomplete, certified = _search(
        hat, params.depth, delta_hat, params.budget, normf, spectral_radius, domf,
        params.seed_depth,
    )
    rows = tuple(
        (t, float(per_norm[t] * scale), float(per_spec.get(t, 0.0) * scale))
        for t in sorted(per_norm)
    )
    lower = float(ell * scale)
    upper = float(upper * scale)
    if certified:
        # rescaling can overshoot the branch-and-bound certificate by one ulp
        u = lower + params.delta
        while u - lower > params.delta:
            u = math.nextafter(u, -math.inf)
        upper = min(upper, u)
    return JsrBounds(
        lower=lower,
        upper=upper,
        depth=params.depth,
        lower_witness=wit,
        norm_used=norm_label,
        semantics=semantics_label,
        per_depth=rows,
        incomplete=incomplete,
        nodes=nodes,
        delta=params.delta,
    )


def jsr_bounds(family, cone: PolyhedralCone | None = None,
               params: JsrParams | None = None) -> JsrBounds:
    """Certified bounds on the joint spectral radius of a family.

    Discrete semantics returns bounds on the radius itself.  Continuous
    and jump semantics sample products of step exponentials and report
    per-unit-time growth rates; their lower bounds are sound, the upper
    bounds depend on the sampling grid and carry ``heuristic_upper``.
    """
    if not isinstance(family, MatrixFamily):
        family = discrete_family(family)
    params = params or JsrParams()
    if family.semantics == DISCRETE:
        return _discrete_bounds(family, cone, params)

    h = float(params.step)
    if h <= 0.0:
        raise BadParams("step must be positive")
    if family.semantics == CONTINUOUS:
        sampled = discrete_family([matrix_exponential(A, h) for A in family.matrices])
    elif family.semantics == JUMP:
        sampled = discrete_family(
            [matrix_exponential(A, h) @ Pi for A, Pi in family.pairs]
        )
    else:
        raise MethodUnavailable(f"unknown semantics {family.semantics!r}")
    disc = _discrete_bounds(sampled, cone, params, semantics_label=family.semantics)
    rows = tuple((t * h, n ** (1.0 / h), r ** (1.0 / h)) for t, n, r in disc.per_depth)
    wit = tuple((j, h) for j in disc.lower_witness)
    return replace(
        disc,
        lower=disc.lower ** (1.0 / h),
        upper=disc.upper ** (1.0 / h),
        lower_witness=wit,
        per_depth=rows,
        heuristic_upper=True,
    )


def continuous_refinement_table(family, cone=None, steps=(1.0, 0.5, 0.25),
                                params: JsrParams | None = None):
    """Growth-rate bounds under successive halvings of the sampling step."""
    params = params or JsrParams()
    rows = []
    for h in steps:
        b = jsr_bounds(family, cone, replace(params, step=float(h)))
        rows.append((float(h), b.lower, b.upper))
    return rows


@dataclass(frozen=True)
class ConvexityReport:
    max_ratio: float
    violations: tuple
    intervals_overlap: bool
    augmented: JsrBounds


def convexity_checks(family, bounds: JsrBounds, cone=None, samples: int = 200,
                     rng=None, params: JsrParams | None = None) -> ConvexityReport:
    """Consistency checks of computed bounds against convex combinations.

    Every convex combination of family members has spectral radius at
    most the joint spectral radius, so a certified upper bound must
    dominate all of them; a violation is reported and raised as
    :class:`ViolationFound`.  The bounds are also recomputed on the family
    augmented with sampled combinations and the intervals must overlap.
    """
    if not isinstance(family, MatrixFamily):
        family = discrete_family(family)
    if family.semantics == JUMP:
        raise MethodUnavailable("convexity checks apply to discrete and continuous families")
    rng = np.random.default_rng(rng)
    mats = np.stack(family.matrices)
    tol = 1e-9 * max(1.0, bounds.upper)
    max_ratio = 0.0
    violations = []
    extra = []
    for k in range(samples):
        w = rng.dirichlet(np.ones(len(family.matrices)))
        A = np.tensordot(w, mats, axes=1)
        if family.semantics == CONTINUOUS:
            val = math.exp(float(np.linalg.eigvals(A).real.max()))
        else:
            val = spectral_radius(A)
        max_ratio = max(max_ratio, val / bounds.upper if bounds.upper > 0 else math.inf)
        if val > bounds.upper + tol:
            violations.append((tuple(w), val))
        if k < 4:
            extra.append(A)
    if violations and not bounds.heuristic_upper:
        w, val = violations[0]
        raise ViolationFound(
            f"convex combination {np.round(w, 6).tolist()} has spectral radius "
            f"{val:.12g} above the certified upper bound {bounds.upper:.12g}"
        )
    params = params or JsrParams()
    if family.semantics == CONTINUOUS:
        aug_family = MatrixFamily(CONTINUOUS, family.dim, family.matrices + tuple(extra))
    else:
        aug_family = discrete_family(list(family.matrices) + extra)
    aug = jsr_bounds(aug_family, cone, params)
    overlap = aug.lower <= bounds.upper + tol and bounds.lower <= aug.upper + tol
    if not overlap and not bounds.heuristic_upper:
        raise ViolationFound(
            f"bounds [{bounds.lower}, {bounds.upper}] and augmented bounds "
            f"[{aug.lower}, {aug.upper}] do not overlap"
        )
    return ConvexityReport(max_ratio, tuple(violations), overlap, aug)
