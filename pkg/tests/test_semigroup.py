"""Product structures: discrete enumeration, exponential slices, jump evolution."""

from __future__ import annotations

import itertools
import math

import numpy as np
import pytest

from conejsr import (
    BadGrid,
    BadParams,
    BudgetExceeded,
    IndexOutOfRange,
    NotCommuting,
    NotProjection,
    continuous_family,
    continuous_slice,
    discrete_family,
    enumerate_products,
    evolve_jump,
    is_cone_preserving,
    matrix_exponential,
    orthant,
    projection_product_diagnostic,
    validate_jump_family,
)

from conftest import EYE2, SWAP, random_metzler

# oblique projection pair whose alternating products grow geometrically
OBLIQUE_1 = np.array([[1.0, 2.0], [0.0, 0.0]])
OBLIQUE_2 = np.array([[0.0, 0.0], [2.0, 1.0]])


class TestEnumeration:
    def test_singleton_powers(self):
        A = np.array([[1.0, 1.0], [0.0, 1.0]])
        words = list(enumerate_products(discrete_family([A]), 3))
        assert [w.word for w in words] == [(0,), (0, 0), (0, 0, 0)]
        assert np.allclose(words[-1].matrix, np.linalg.matrix_power(A, 3))

    def test_pair_tree_order_and_count(self, golden_family):
        words = list(enumerate_products(golden_family, 2))
        assert [w.word for w in words] == [
            (0,), (0, 0), (0, 1), (1,), (1, 0), (1, 1),
        ]
        assert all(w.t == len(w.word) for w in words)

    def test_word_is_applied_first_factor_first(self, golden_family):
        a, b = golden_family.matrices
        by_word = {w.word: w.matrix for w in enumerate_products(golden_family, 2)}
        assert np.array_equal(by_word[(0, 1)], b @ a)
        assert np.array_equal(by_word[(1, 0)], a @ b)

    def test_permutation_family_stays_in_group(self, swap_family):
        for w in enumerate_products(swap_family, 4):
            assert any(
                np.array_equal(w.matrix, M) for M in (EYE2, SWAP)
            )

    def test_semigroup_law_on_concatenations(self, golden_family):
        by_word = {w.word: w.matrix for w in enumerate_products(golden_family, 4)}
        for w1, w2 in itertools.product(
            [(0,), (1,), (0, 1), (1, 1)], repeat=2
        ):
            lhs = by_word[w1 + w2]
            assert np.array_equal(lhs, by_word[w2] @ by_word[w1])

    def test_prune_cuts_subtrees(self, golden_family):
        words = list(enumerate_products(golden_family, 5, prune=lambda w: True))
        assert [w.word for w in words] == [(0,), (1,)]

    def test_budget_checked_up_front(self, golden_family):
        gen = enumerate_products(golden_family, 10, budget=100)
        with pytest.raises(BudgetExceeded):
            next(gen)

    def test_products_of_preserving_members_preserve(self):
        K = orthant(2)
        rng = np.random.default_rng(0)
        fam = discrete_family([rng.uniform(0, 1, (2, 2)) for _ in range(2)])
        assert all(
            is_cone_preserving(w.matrix, K) for w in enumerate_products(fam, 5)
        )

    def test_depth_must_be_positive(self, golden_family):
        with pytest.raises(BadParams):
            list(enumerate_products(golden_family, 0))


class TestContinuousSlices:
    def test_single_member_grid_is_one_exponential(self):
        A = np.array([[-1.0, 2.0], [0.5, -1.0]])
        fam = continuous_family([A])
        words = list(continuous_slice(fam, 1.0, [0.3, 0.7]))
        assert len(words) == 1
        assert np.allclose(words[0].matrix, matrix_exponential(A, 1.0), rtol=1e-12)
        assert words[0].t == pytest.approx(1.0)

    def test_two_members_two_segments(self):
        fam = continuous_family([np.zeros((2, 2)), SWAP])
        words = list(continuous_slice(fam, 1.0, [0.5, 0.5]))
        assert len(words) == 4
        assert {w.word[0][0] for w in words} == {0, 1}

    def test_zero_member_yields_identity(self):
        B = np.array([[0.1, 0.3], [0.2, 0.1]])
        fam = continuous_family([np.zeros((2, 2)), B])
        mats = [w.matrix for w in continuous_slice(fam, 1.0, [1.0])]
        assert np.allclose(mats[0], np.eye(2))
        assert np.allclose(mats[1], matrix_exponential(B, 1.0))

    def test_integer_grid_means_equal_segments(self):
        A = np.array([[-0.5, 1.0], [0.0, -0.2]])
        fam = continuous_family([A])
        (word,) = continuous_slice(fam, 2.0, 4)
        assert [g for _, g in word.word] == [0.5] * 4
        assert np.allclose(word.matrix, matrix_exponential(A, 2.0), rtol=1e-10)

    def test_bad_grids_rejected(self):
        fam = continuous_family([np.zeros((2, 2))])
        with pytest.raises(BadGrid):
            list(continuous_slice(fam, 1.0, [0.5, -0.5]))
        with pytest.raises(BadGrid):
            list(continuous_slice(fam, 1.0, [0.3, 0.3]))
        with pytest.raises(BadGrid):
            list(continuous_slice(fam, 1.0, 0))

    def test_slices_of_cross_positive_members_preserve(self):
        K = orthant(2)
        rng = np.random.default_rng(1)
        fam = continuous_family([random_metzler(rng, 2) for _ in range(2)])
        for w in continuous_slice(fam, 2.0, [0.5, 1.0, 0.5]):
            assert is_cone_preserving(w.matrix, K)


class TestJumpValidation:
    def test_identity_projection_always_valid(self):
        fam = validate_jump_family([(SWAP, EYE2)])
        assert fam.semantics == "jump" and len(fam.pairs) == 1

    def test_commuting_diagonal_pair_valid(self):
        fam = validate_jump_family([(np.diag([1.0, 2.0]), np.diag([1.0, 0.0]))])
        assert len(fam.pairs) == 1

    def test_non_commuting_pair_rejected_with_index(self):
        pairs = [
            (np.diag([1.0, 2.0]), EYE2),
            (SWAP, np.diag([1.0, 0.0])),
        ]
        with pytest.raises(NotCommuting) as err:
            validate_jump_family(pairs)
        assert err.value.index == 1

    def test_non_idempotent_projection_rejected(self):
        with pytest.raises(NotProjection) as err:
            validate_jump_family([(np.eye(2), np.array([[1.0, 1.0], [0.0, 1.0]]))])
        assert err.value.index == 0


class TestJumpEvolution:
    def test_identity_projection_reduces_to_exponential(self):
        A = np.array([[-0.3, 1.0], [0.2, -0.1]])
        fam = validate_jump_family([(A, EYE2)])
        word = evolve_jump(fam, [(0, 1.7)])
        assert np.allclose(word.matrix, matrix_exponential(A, 1.7), atol=1e-12)
        assert word.t == pytest.approx(1.7)

    def test_zero_flow_applies_projection_only(self):
        Pi = np.diag([1.0, 0.0])
        fam = validate_jump_family([(np.zeros((2, 2)), Pi)])
        word = evolve_jump(fam, [(0, 2.0), (0, 1.0)])
        assert np.array_equal(word.matrix, Pi)

    def test_orthogonal_projectors_annihilate(self):
        fam = validate_jump_family(
            [
                (np.zeros((2, 2)), np.diag([1.0, 0.0])),
                (np.zeros((2, 2)), np.diag([0.0, 1.0])),
            ]
        )
        word = evolve_jump(fam, [(0, 1.0), (1, 1.0)])
        assert np.array_equal(word.matrix, np.zeros((2, 2)))

    def test_matches_manual_operator_chain(self):
        A = np.diag([1.0, 2.0])
        B = np.diag([0.5, -1.0])
        fam = validate_jump_family([(A, np.diag([1.0, 0.0])), (B, EYE2)])
        word = evolve_jump(fam, [(0, 0.5), (1, 0.25)])
        manual = (
            matrix_exponential(B, 0.25)
            @ EYE2
            @ matrix_exponential(A, 0.5)
            @ np.diag([1.0, 0.0])
        )
        assert np.allclose(word.matrix, manual, rtol=1e-12)
        assert word.word == ((0, 0.5), (1, 0.25))

    def test_bad_signal_index(self):
        fam = validate_jump_family([(np.zeros((2, 2)), EYE2)])
        with pytest.raises(IndexOutOfRange):
            evolve_jump(fam, [(5, 1.0)])

    def test_block_respecting_flows_keep_evolutions_nonnegative(self):
        # diagonal 0/1 projections with flows vanishing across the split
        K = orthant(3)
        rng = np.random.default_rng(2)
        for _ in range(25):
            mask = rng.integers(0, 2, size=3).astype(float)
            while mask.sum() == 0:
                mask = rng.integers(0, 2, size=3).astype(float)
            Pi = np.diag(mask)
            A = random_metzler(rng, 3)
            block = np.equal.outer(mask, mask)
            A = A * block  # now A commutes with Pi
            fam = validate_jump_family([(A, Pi)])
            sig = [(0, float(d)) for d in rng.uniform(0.1, 1.0, size=3)]
            assert is_cone_preserving(evolve_jump(fam, sig).matrix, K)


class TestProjectionDiagnostic:
    def test_identity_is_bounded(self):
        diag = projection_product_diagnostic([EYE2], depth=6)
        assert diag.status == "bounded_up_to_depth"
        assert diag.max_norm == pytest.approx(1.0)

    def test_orthogonal_projectors_are_bounded(self):
        diag = projection_product_diagnostic(
            [np.diag([1.0, 0.0]), np.diag([0.0, 1.0])], depth=6
        )
        assert diag.status == "bounded_up_to_depth"
        assert diag.max_norm == pytest.approx(1.0)

    def test_oblique_pair_bounded_below_kilonorm_at_depth_8(self):
        diag = projection_product_diagnostic([OBLIQUE_1, OBLIQUE_2], depth=8,
                                             threshold=1e3)
        assert diag.status == "bounded_up_to_depth"
        # the largest product is the fully alternating word of length 8
        assert diag.max_norm == pytest.approx(128.0 * math.sqrt(5.0), rel=1e-12)

    def test_oblique_pair_exceeds_kilonorm_at_depth_10(self):
        diag = projection_product_diagnostic([OBLIQUE_1, OBLIQUE_2], depth=10,
                                             threshold=1e3)
        assert diag.status == "exceeded"
        assert diag.witness == (0, 1) * 5
        assert diag.depth == 10
        assert diag.max_norm == pytest.approx(512.0 * math.sqrt(5.0), rel=1e-12)

    def test_oblique_pair_first_word_over_hundred(self):
        # preorder reaches the idempotent-padded alternation 00101010, whose
        # product collapses to P1 (P2 P1)^3, before any word starting 01
        diag = projection_product_diagnostic([OBLIQUE_1, OBLIQUE_2], depth=8,
                                             threshold=100.0)
        assert diag.status == "exceeded"
        assert diag.witness == (0, 0, 1, 0, 1, 0, 1, 0)
        assert diag.depth == 8
        assert diag.max_norm == pytest.approx(64.0 * math.sqrt(5.0), rel=1e-12)

    def test_rejects_non_idempotent_input(self):
        with pytest.raises(NotProjection):
            projection_product_diagnostic([SWAP], depth=3)
