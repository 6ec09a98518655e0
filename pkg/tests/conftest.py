"""Shared fixtures and test helpers.

Membership questions are cross-checked against an independent oracle
(nonnegative least squares on the generator matrix) so the facet-based
classifier is never tested against itself.
"""

from __future__ import annotations

import numpy as np
import pytest
import scipy.optimize
from hypothesis import HealthCheck, settings

from conejsr import (
    PolyhedralCone,
    discrete_family,
    general_cone,
    orthant,
    simplicial_cone,
)

settings.register_profile(
    "suite",
    max_examples=50,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much],
)
settings.load_profile("suite")


SWAP = np.array([[0.0, 1.0], [1.0, 0.0]])
EYE2 = np.eye(2)
GOLDEN = (1.0 + np.sqrt(5.0)) / 2.0

# upper/lower triangular pair whose joint spectral radius is the golden ratio
PAIR_A = np.array([[1.0, 1.0], [0.0, 1.0]])
PAIR_B = np.array([[1.0, 0.0], [1.0, 1.0]])


@pytest.fixture(scope="session")
def orthant2() -> PolyhedralCone:
    return orthant(2)


@pytest.fixture(scope="session")
def orthant3() -> PolyhedralCone:
    return orthant(3)


@pytest.fixture(scope="session")
def skew_cone() -> PolyhedralCone:
    """Simplicial cone spanned by (1,0) and (1,1); facets (1,-1) and (0,1)."""
    return simplicial_cone([[1.0, 0.0], [1.0, 1.0]])


@pytest.fixture(scope="session")
def pyramid_cone() -> PolyhedralCone:
    """Four-generator cone over a square base, not simplicial."""
    gens = [[1.0, 1.0, 1.0], [-1.0, 1.0, 1.0], [-1.0, -1.0, 1.0], [1.0, -1.0, 1.0]]
    return general_cone(gens)


@pytest.fixture(scope="session")
def swap_family():
    return discrete_family([SWAP, EYE2], labels=["swap", "id"])


@pytest.fixture(scope="session")
def golden_family():
    return discrete_family([PAIR_A, PAIR_B])


def in_cone_oracle(cone: PolyhedralCone, x, tol: float = 1e-7) -> bool:
    """Cone membership decided by nonnegative least squares on the generators."""
    x = np.asarray(x, dtype=float)
    _, resid = scipy.optimize.nnls(cone.generators.T, x)
    return resid <= tol * max(1.0, float(np.linalg.norm(x)))


def random_cone_preserving(rng, n: int, scale: float = 1.0) -> np.ndarray:
    """Entrywise nonnegative matrix: preserves the orthant by construction."""
    return scale * rng.uniform(0.0, 1.0, size=(n, n))


def random_metzler(rng, n: int, density: float = 0.5) -> np.ndarray:
    off = rng.uniform(0.0, 2.0, size=(n, n)) * (rng.random((n, n)) < density)
    np.fill_diagonal(off, rng.uniform(-2.0, 1.0, size=n))
    return off
