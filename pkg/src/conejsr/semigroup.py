"""Matrix families and the product semigroups they generate.

Discrete families generate all finite products; continuous families are
sampled through piecewise-constant exponential products on a duration
grid (every such product is a true semigroup element, so lower bounds
derived from them are sound); jump systems pair a flow matrix with a
commuting projection.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    BadGrid,
    BadParams,
    BudgetExceeded,
    DimensionMismatch,
    IndexOutOfRange,
    NotCommuting,
    NotProjection,
)
from .maps import matrix_exponential

DEFAULT_ENUM_BUDGET = 10_000_000

DISCRETE = "discrete"
CONTINUOUS = "continuous"
JUMP = "jump"


@dataclass(frozen=True)
class MatrixFamily:
    """A finite set of square matrices (or flow/projection pairs) plus semantics."""

    semantics: str
    dim: int
    matrices: tuple = ()
    pairs: tuple = ()
    labels: tuple = ()

    @property
    def size(self) -> int:
        return len(self.pairs) if self.semantics == JUMP else len(self.matrices)

    def projections(self) -> list:
        """Deduplicated projection set of a jump family."""
        out = []
        for _, pi in self.pairs:
            if not any(np.allclose(pi, q, atol=1e-12) for q in out):
                out.append(pi)
        return out


@dataclass(frozen=True)
class ProductWord:
    """A product of family members, stored with its factor word.

    ``word`` lists factors in application order (first factor applied
    first), so ``matrix`` is the right-to-left evaluation of the word.
    For timed semantics the entries are ``(index, duration)`` pairs and
    ``t`` is the total duration; for discrete words ``t = len(word)``.
    """

    word: tuple
    t: float
    matrix: np.ndarray

    def __post_init__(self):
        self.matrix.setflags(write=False)


def _check_members(mats, what="matrix"):
    out = []
    dim = None
    for k, A in enumerate(mats):
        A = np.asarray(A, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise DimensionMismatch(f"{what} {k} is not square: shape {A.shape}")
        if dim is None:
            dim = A.shape[0]
        elif A.shape[0] != dim:
            raise DimensionMismatch(f"{what} {k} has dimension {A.shape[0]}, expected {dim}")
        if not np.all(np.isfinite(A)):
            raise BadParams(f"{what} {k} contains non-finite entries")
        out.append(A)
    if not out:
        raise BadParams("family must be nonempty")
    return out, dim


def discrete_family(matrices, labels=None) -> MatrixFamily:
    mats, dim = _check_members(matrices)
    return MatrixFamily(DISCRETE, dim, tuple(mats), labels=_labels(labels, len(mats)))


def continuous_family(matrices, labels=None) -> MatrixFamily:
    mats, dim = _check_members(matrices)
    return MatrixFamily(CONTINUOUS, dim, tuple(mats), labels=_labels(labels, len(mats)))


def _labels(labels, count):
    if labels is None:
        return tuple(str(k) for k in range(count))
    if len(labels) != count:
        raise BadParams(f"got {len(labels)} labels for {count} members")
    return tuple(str(l) for l in labels)


def validate_jump_family(pairs, labels=None, tol: float = 1e-9) -> MatrixFamily:
    """Jump family: each pair ``(A, Pi)`` needs ``Pi^2 = Pi`` and ``A Pi = Pi A``."""
    flows, dim = _check_members([p[0] for p in pairs], "flow")
    projs, pdim = _check_members([p[1] for p in pairs], "projection")
    if pdim != dim:
        raise DimensionMismatch("flow and projection dimensions differ")
    for k, (A, Pi) in enumerate(zip(flows, projs)):
        scale = max(1.0, float(np.linalg.norm(Pi)))
        if np.linalg.norm(Pi @ Pi - Pi) > tol * scale:
            raise NotProjection(k)
        comm = max(1.0, float(np.linalg.norm(A)) * scale)
        if np.linalg.norm(A @ Pi - Pi @ A) > tol * comm:
            raise NotCommuting(k)
    return MatrixFamily(JUMP, dim, pairs=tuple(zip(flows, projs)), labels=_labels(labels, len(flows)))


def enumerate_products(family: MatrixFamily, depth: int, prune=None,
                       budget: int = DEFAULT_ENUM_BUDGET):
    """Depth-first stream of all products of word length 1..depth.

    Words are visited in lexicographic order of their index words.  A
    ``prune(word) -> bool`` callback cuts the subtree below a word (the
    word itself has already been yielded).  Without a prune callback the
    full tree size is checked against ``budget`` up front.
    """
    if family.semantics != DISCRETE:
        raise BadParams("product enumeration needs a discrete family")
    if depth < 1:
        raise BadParams("depth must be at least 1")
    mats = family.matrices
    m = len(mats)
    if prune is None:
        total = sum(m ** k for k in range(1, depth + 1))
        if total > budget:
            raise BudgetExceeded(f"{total} words exceed the budget of {budget}")

    def extend(word, matrix):
        for j in range(m):
            w = word + (j,)
            mat = mats[j] @ matrix if word else mats[j]
            pw = ProductWord(w, float(len(w)), mat)
            yield pw
            if len(w) < depth and not (prune is not None and prune(pw)):
                yield from extend(w, mat)

    yield from extend((), None)


def continuous_slice(family: MatrixFamily, t: float, grid):
    """Stream of piecewise-constant exponential products over a duration grid.

    ``grid`` is a list of positive durations summing to ``t``, or an
    integer count of equal segments; for each segment every family member
    may be active, so ``size ** len(grid)`` words are produced.  Each
    product is an exact semigroup element.
    """
    if family.semantics != CONTINUOUS:
        raise BadParams("duration slices need a continuous family")
    if isinstance(grid, int):
        if grid < 1:
            raise BadGrid("segment count must be positive")
        grid = [float(t) / grid] * grid
    grid = [float(g) for g in grid]
    if not grid or any(g <= 0 for g in grid):
        raise BadGrid("durations must be positive")
    if abs(sum(grid) - float(t)) > 1e-9 * max(1.0, abs(float(t))):
        raise BadGrid(f"durations sum to {sum(grid)}, expected {t}")
    m = family.size
    exps = [[matrix_exponential(A, g) for A in family.matrices] for g in grid]

    def extend(level, word, matrix):
        for j in range(m):
            mat = exps[level][j] if matrix is None else exps[level][j] @ matrix
            w = word + ((j, grid[level]),)
            if level + 1 == len(grid):
                yield ProductWord(w, float(sum(g for _, g in w)), mat)
            else:
                yield from extend(level + 1, w, mat)

    yield from extend(0, (), None)


def evolve_jump(family: MatrixFamily, signal) -> ProductWord:
    """Evolution operator of a jump system along a switching signal.

    ``signal`` is a sequence of ``(pair_index, duration)`` entries in time
    order; each segment applies the pair's projection at switch-in and
    then runs the flow for the given duration.
    """
    if family.semantics != JUMP:
        raise BadParams("evolution requires a jump family")
    mat = np.eye(family.dim)
    word = []
    total = 0.0
    for step, entry in enumerate(signal):
        try:
            idx, dur = int(entry[0]), float(entry[1])
        except (TypeError, ValueError, IndexError) as exc:
            raise BadParams(f"signal entry {step} is not (index, duration)") from exc
        if not 0 <= idx < len(family.pairs):
            raise IndexOutOfRange(f"signal entry {step} references pair {idx}")
        if dur < 0:
            raise BadParams(f"signal entry {step} has negative duration")
        A, Pi = family.pairs[idx]
        mat = matrix_exponential(A, dur) @ (Pi @ mat)
        word.append((idx, dur))
        total += dur
    return ProductWord(tuple(word), total, mat)


@dataclass(frozen=True)
class ProjectionDiagnostic:
    status: str  # "bounded_up_to_depth" or "exceeded"
    max_norm: float
    depth: int
    witness: tuple | None = None


def projection_product_diagnostic(projections, depth: int, threshold: float = 1e3,
                                  budget: int = 1_000_000) -> ProjectionDiagnostic:
    """Scan products of projections for norm growth.

    Bounded projection products are necessary for a jump semigroup to be
    bounded; an alternating pair of oblique projections can grow
    geometrically, which this scan detects.
    """
    projs, dim = _check_members(projections, "projection")
    for k, Pi in enumerate(projs):
        if np.linalg.norm(Pi @ Pi - Pi) > 1e-9 * max(1.0, float(np.linalg.norm(Pi))):
            raise NotProjection(k)
    fam = MatrixFamily(DISCRETE, dim, tuple(projs))
    max_norm = 0.0
    for count, pw in enumerate(enumerate_products(fam, depth, budget=budget)):
        if count >= budget:
            raise BudgetExceeded(f"projection scan exceeded {budget} nodes")
        nrm = float(np.linalg.norm(pw.matrix, 2))
        max_norm = max(max_norm, nrm)
        if nrm > threshold:
            return ProjectionDiagnostic("exceeded", max_norm, int(pw.t), pw.word)
    return ProjectionDiagnostic("bounded_up_to_depth", max_norm, depth)
