"""Single-matrix positivity predicates and the matrix exponential."""

from __future__ import annotations

import numpy as np
import pytest

from conejsr import (
    DimensionMismatch,
    classify_map,
    classify_point,
    clip_to_cone_preserving,
    is_K_positive,
    is_cone_preserving,
    is_cross_positive,
    is_exp_K_positive,
    matrix_exponential,
    orthant,
)

from conftest import SWAP, random_metzler


@pytest.fixture(scope="module")
def K2():
    return orthant(2)


class TestPreserving:
    def test_swap_preserves_orthant(self, K2):
        assert is_cone_preserving(SWAP, K2)

    def test_negative_image_detected_with_witness(self, K2):
        v = is_cone_preserving([[1, -1], [0, 1]], K2)
        assert not v
        assert v.witness["generator"] == 1  # e2 maps to (-1, 1)

    def test_identity_always_preserves(self, K2):
        assert is_cone_preserving(np.eye(2), K2)

    def test_shape_check(self, K2):
        with pytest.raises(DimensionMismatch):
            is_cone_preserving(np.eye(3), K2)

    def test_products_of_preserving_maps_preserve(self, K2):
        rng = np.random.default_rng(0)
        for _ in range(50):
            A = rng.uniform(0, 1, (2, 2))
            B = rng.uniform(0, 1, (2, 2))
            assert is_cone_preserving(A @ B, K2)


class TestPositive:
    def test_all_ones_is_positive(self, K2):
        assert is_K_positive(np.ones((2, 2)), K2)

    def test_swap_hits_the_boundary(self, K2):
        assert not is_K_positive(SWAP, K2)

    def test_identity_is_not_positive(self, K2):
        assert not is_K_positive(np.eye(2), K2)

    def test_positive_implies_preserving(self, K2):
        rng = np.random.default_rng(1)
        for _ in range(100):
            A = rng.normal(size=(2, 2))
            c = classify_map(A, K2)
            if c.k_positive:
                assert c.cone_preserving
            if c.cone_preserving:
                assert c.cross_positive


class TestCrossPositive:
    def test_metzler_sign_pattern(self, K2):
        assert is_cross_positive([[-5, 2], [3, -7]], K2)

    def test_rotation_fails_with_witness(self, K2):
        v = is_cross_positive([[0, -1], [1, 0]], K2)
        assert not v
        assert v.witness["generator"] == 1 and v.witness["facet"] == 0

    def test_shift_of_preserving_map(self, K2):
        rng = np.random.default_rng(2)
        for _ in range(50):
            B = rng.uniform(0, 1, (2, 2))
            lam = rng.normal() * 5
            assert is_cross_positive(B + lam * np.eye(2), K2)

    def test_matches_metzler_oracle_on_orthant(self):
        K3 = orthant(3)
        rng = np.random.default_rng(3)
        for _ in range(200):
            A = rng.normal(size=(3, 3))
            offdiag = A[~np.eye(3, dtype=bool)]
            assert bool(is_cross_positive(A, K3)) == bool(np.all(offdiag >= 0))


class TestExponential:
    def test_zero_matrix(self):
        assert np.array_equal(matrix_exponential(np.zeros((2, 2))), np.eye(2))

    def test_nilpotent_series_terminates(self):
        out = matrix_exponential([[0, 1], [0, 0]], 1.0)
        assert np.allclose(out, [[1, 1], [0, 1]], atol=1e-14)

    def test_diagonal_scalar_exponentials(self):
        out = matrix_exponential(np.diag([1.0, 2.0]), np.log(2.0))
        assert np.allclose(out, np.diag([2.0, 4.0]), rtol=1e-12)

    def test_negative_time_rejected(self):
        from conejsr import BadParams

        with pytest.raises(BadParams):
            matrix_exponential(np.eye(2), -1.0)

    def test_semigroup_additivity(self):
        rng = np.random.default_rng(4)
        for _ in range(30):
            A = rng.normal(size=(3, 3)) - 2 * np.eye(3)
            s, t = rng.uniform(0.1, 2, size=2)
            lhs = matrix_exponential(A, s + t)
            rhs = matrix_exponential(A, s) @ matrix_exponential(A, t)
            assert np.allclose(lhs, rhs, rtol=1e-10, atol=1e-12)

    def test_cross_positive_generates_preserving_flow(self, K2):
        rng = np.random.default_rng(5)
        for _ in range(30):
            A = random_metzler(rng, 2)
            for t in (0.1, 0.7, 2.0, 5.0):
                assert is_cone_preserving(matrix_exponential(A, t), K2)


class TestExpPositivity:
    def test_positive_offdiagonal_flow(self, K2):
        verdict, detail = is_exp_K_positive([[-1, 2], [0.5, -1]], K2, times=(0.5, 1, 2))
        assert verdict == "true_on_samples"
        assert detail["times"] == [0.5, 1, 2]

    def test_triangular_flow_rejected_by_eigenvector(self, K2):
        verdict, detail = is_exp_K_positive([[-1, 0], [1, -1]], K2)
        assert verdict == "false"
        vec = np.asarray(detail["eigenvector"])
        assert np.allclose(np.abs(vec) / np.linalg.norm(vec), [0, 1], atol=1e-9)

    def test_rotation_rejected_by_cross_positivity(self, K2):
        verdict, detail = is_exp_K_positive([[0, -1], [1, 0]], K2)
        assert verdict == "false"
        assert detail["reason"] == "not cross-positive"

    def test_classification_consistency(self, K2):
        c = classify_map([[-1, 2], [0.5, -1]], K2)
        assert c.cross_positive and not c.cone_preserving
        assert c.exp_k_positive == "true_on_samples"


class TestClip:
    def test_already_preserving_is_unchanged(self, K2):
        A = np.array([[0.3, 0.7], [0.1, 0.2]])
        assert np.array_equal(clip_to_cone_preserving(A, K2), A)

    def test_single_negative_entry_repair(self, K2):
        A = np.array([[1.0, -0.5], [0.0, 1.0]])
        B = clip_to_cone_preserving(A, K2)
        # rank-one correction with the smallest multiple of the all-ones matrix
        assert np.allclose(B, A + 0.5 * np.ones((2, 2)))
        assert is_cone_preserving(B, K2)
        assert classify_point(K2, B @ np.array([0.0, 1.0])).verdict != "outside"

    def test_repair_always_lands_in_preserving_set(self, K2):
        rng = np.random.default_rng(6)
        for _ in range(100):
            A = rng.normal(size=(2, 2))
            B = clip_to_cone_preserving(A, K2)
            assert is_cone_preserving(B, K2)
            # idempotent: repairing a repaired matrix changes nothing
            assert np.allclose(clip_to_cone_preserving(B, K2), B, atol=1e-12)
