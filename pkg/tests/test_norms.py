"""Base gauges, truncated extremal norms, eccentricity and boundedness scans."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conejsr import (
    ABSOLUTE,
    MONOTONE,
    BadParams,
    BaseNorm,
    FamilyReducible,
    JsrParams,
    MethodUnavailable,
    NormApprox,
    NotConePreserving,
    NotInterior,
    NotSimplicial,
    base_monotone_norm,
    boundedness_diagnostic,
    build_extremal_norm,
    continuous_family,
    eccentricity,
    extremality_residual,
    general_cone,
    induced_matrix_norm,
    jsr_bounds,
    norm_positivity,
    orthant,
    simplicial_cone,
)

from conftest import EYE2, GOLDEN, PAIR_A, PAIR_B, SWAP

FLIP = np.array([[0.0, 2.0], [0.5, 0.0]])

coords = st.floats(-10.0, 10.0, allow_nan=False, allow_infinity=False)


@pytest.fixture(scope="module")
def K2():
    return orthant(2)


@pytest.fixture(scope="module")
def sup_base(K2):
    return base_monotone_norm(K2)


@pytest.fixture(scope="module")
def flip_norm(K2):
    return build_extremal_norm([FLIP], K2, 1.0, 2)


@pytest.fixture(scope="module")
def chain_norm(K2):
    # one functional pushed once through the involution family
    base = BaseNorm(np.array([[1.0, 1.0]]), np.array([1.0, 1.0]), K2)
    return build_extremal_norm([FLIP], K2, 1.0, 1, base=base)


class TestBaseGauge:
    def test_orthant_gauge_is_sup_norm(self, sup_base):
        assert np.array_equal(sup_base.functionals, np.eye(2))
        assert sup_base.value([3.0, -4.0]) == 4.0
        assert sup_base.value([0.5, 0.25]) == 0.5

    def test_orthant_matrix_norm_is_max_row_sum(self, sup_base):
        assert sup_base.matrix_norm([[1.0, -2.0], [3.0, 4.0]]) == 7.0

    def test_skew_cone_gauge(self):
        cone = simplicial_cone([[1.0, 0.0], [1.0, 1.0]])
        base = base_monotone_norm(cone)
        assert np.allclose(base.reference, [2.0, 1.0])
        rows = {tuple(np.round(r, 9)) for r in base.functionals}
        assert rows == {(1.0, -1.0), (0.0, 1.0)}
        # max(|x1 - x2|, |x2|) on frozen points
        assert base.value([1.0, 0.0]) == pytest.approx(1.0)
        assert base.value([2.0, 1.0]) == pytest.approx(1.0)
        assert base.value([3.0, 1.0]) == pytest.approx(2.0)
        assert base.value([-1.0, 2.0]) == pytest.approx(3.0)

    def test_custom_reference_rescales(self, K2):
        base = base_monotone_norm(K2, e=[2.0, 1.0])
        assert np.allclose(base.functionals, np.diag([0.5, 1.0]))
        assert base.value([2.0, 1.0]) == pytest.approx(1.0)

    def test_boundary_reference_rejected(self, K2):
        with pytest.raises(NotInterior):
            base_monotone_norm(K2, e=[1.0, 0.0])

    @given(x=st.tuples(coords, coords), d=st.tuples(coords, coords))
    def test_monotone_on_the_cone(self, x, d):
        base = base_monotone_norm(orthant(2))
        lo = np.abs(np.array(x))
        hi = lo + np.abs(np.array(d))
        assert base.value(lo) <= base.value(hi) + 1e-12


class TestConstruction:
    def test_involution_table_is_frozen(self, flip_norm):
        assert flip_norm.functionals.tolist() == [[1.0, 0.0], [0.0, 1.0], [0.0, 2.0]]
        assert flip_norm.n_base_rows == 2
        assert flip_norm.rho_hat == 1.0 and flip_norm.mode == MONOTONE

    def test_involution_norm_values(self, flip_norm):
        # max(|x1|, 2 |x2|)
        assert flip_norm.value([1.0, 1.0]) == 2.0
        assert flip_norm.value([2.0, 0.5]) == 2.0
        assert flip_norm.value([0.0, 1.0]) == 2.0
        assert flip_norm.value([-1.0, -1.0]) == 2.0  # monotone mode keeps symmetry

    def test_single_functional_chain(self, chain_norm):
        assert chain_norm.functionals.tolist() == [[1.0, 1.0], [0.5, 2.0]]
        assert chain_norm.n_base_rows == 1

    def test_permutation_family_closes_onto_base(self, K2):
        for mode in (MONOTONE, ABSOLUTE):
            v = build_extremal_norm([SWAP, EYE2], K2, 1.0, 2, mode=mode)
            assert np.array_equal(v.functionals, np.eye(2))

    def test_golden_pair_table_stabilizes(self, K2, golden_family):
        rho = jsr_bounds(golden_family, K2, JsrParams(depth=40, delta=0.02)).upper
        v4 = build_extremal_norm(golden_family, K2, rho, 4)
        v8 = build_extremal_norm(golden_family, K2, rho, 8)
        assert v4.functionals.shape == (9, 2)
        assert np.allclose(v4.functionals, v8.functionals)

    def test_export_round_trip_fields(self, flip_norm):
        doc = flip_norm.export()
        assert doc["rho_hat"] == 1.0 and doc["depth"] == 2
        assert doc["mode"] == MONOTONE
        assert doc["functionals"] == flip_norm.functionals.tolist()

    def test_rejects_non_preserving_member(self, K2):
        with pytest.raises(NotConePreserving):
            build_extremal_norm([[[1.0, -1.0], [0.0, 1.0]]], K2, 1.0, 2)

    def test_rejects_bad_parameters(self, K2):
        with pytest.raises(BadParams):
            build_extremal_norm([FLIP], K2, 0.0, 2)
        with pytest.raises(BadParams):
            build_extremal_norm([FLIP], K2, 1.0, 2, mode="fancy")
        with pytest.raises(BadParams):
            build_extremal_norm(continuous_family([FLIP]), K2, 1.0, 2)

    def test_absolute_mode_needs_lattice(self):
        cone = general_cone([[1, -1, 1], [1, 1, 1], [-1, 1, 1], [-1, -1, 1]])
        with pytest.raises(NotSimplicial):
            build_extremal_norm([np.eye(3)], cone, 1.0, 1, mode=ABSOLUTE)


class TestNormAxioms:
    @given(x=st.tuples(coords, coords), y=st.tuples(coords, coords))
    def test_triangle_inequality(self, x, y):
        v = build_extremal_norm([FLIP], orthant(2), 1.0, 2)
        x, y = np.array(x), np.array(y)
        assert v.value(x + y) <= v.value(x) + v.value(y) + 1e-9

    @given(x=st.tuples(coords, coords), c=st.floats(-4.0, 4.0, allow_nan=False))
    def test_homogeneity(self, x, c):
        v = build_extremal_norm([FLIP], orthant(2), 1.0, 2)
        x = np.array(x)
        assert v.value(c * x) == pytest.approx(abs(c) * v.value(x), rel=1e-12, abs=1e-12)

    @given(x=st.tuples(coords, coords))
    def test_absolute_mode_fixes_lattice_abs(self, x):
        va = build_extremal_norm([SWAP, EYE2], orthant(2), 1.0, 2, mode=ABSOLUTE)
        x = np.array(x)
        assert va.value(np.abs(x)) == va.value(x)

    def test_vectorized_values_match_scalar(self, flip_norm):
        rng = np.random.default_rng(0)
        X = rng.normal(size=(2, 40))
        want = [flip_norm.value(X[:, i]) for i in range(40)]
        assert np.allclose(flip_norm.values(X), want, rtol=0, atol=0)


class TestPositivity:
    def test_full_rank_table_passes(self, chain_norm):
        verdict = norm_positivity(chain_norm)
        assert verdict.ok and verdict.witness is None

    def test_single_functional_fails_with_null_witness(self):
        verdict = norm_positivity(np.array([[1.0, 1.0]]))
        assert not verdict.ok
        w = verdict.witness
        assert np.linalg.norm(w) == pytest.approx(1.0)
        assert abs(w @ np.array([1.0, 1.0])) <= 1e-9

    def test_rank_deficient_table_fails(self):
        assert not norm_positivity(np.array([[1.0, 1.0], [2.0, 2.0]])).ok


class TestResidual:
    def test_involution_norm_is_exactly_extremal(self, flip_norm):
        rep = extremality_residual(flip_norm, [FLIP], rng=0)
        assert rep.residual == 0.0 and rep.member == 0
        assert float(rep) == 0.0

    def test_chain_norm_is_exactly_extremal(self, chain_norm):
        assert extremality_residual(chain_norm, [FLIP], rng=0).residual == 0.0

    def test_doubled_family_overshoots_by_its_factor(self, K2, sup_base):
        v = NormApprox(np.eye(2), 1.0, 0, sup_base, MONOTONE, K2, n_base_rows=2)
        rep = extremality_residual(v, [2.0 * SWAP], rng=0)
        assert rep.residual == pytest.approx(1.0, abs=1e-12)
        assert rep.member == 0 and rep.point.shape == (2,)

    def test_golden_pair_residual_nonpositive_at_certified_rate(self, K2, golden_family):
        rho = jsr_bounds(golden_family, K2, JsrParams(depth=40, delta=0.02)).upper
        v = build_extremal_norm(golden_family, K2, rho, 6)
        assert extremality_residual(v, golden_family, rng=0).residual <= 1e-12

    def test_understated_rate_leaves_positive_residual(self, K2, golden_family):
        v = build_extremal_norm(golden_family, K2, 1.0, 4)
        assert extremality_residual(v, golden_family, rng=0).residual > 0.1


class TestEccentricity:
    def test_base_against_itself(self, K2, sup_base):
        v = NormApprox(np.eye(2), 1.0, 0, sup_base, MONOTONE, K2, n_base_rows=2)
        assert eccentricity(v, sup_base) == pytest.approx(1.0, abs=1e-12)

    def test_involution_norm_doubles(self, flip_norm, sup_base):
        assert eccentricity(flip_norm, sup_base) == pytest.approx(2.0, abs=1e-12)

    def test_chain_norm_vertex_value(self, chain_norm, sup_base):
        # max 2.5 at the ball vertex (1,1), min 0.5 on the facet x1 = 1
        assert eccentricity(chain_norm, sup_base) == pytest.approx(5.0, abs=1e-9)

    def test_sampling_estimates_from_below(self, chain_norm, sup_base):
        est = eccentricity(chain_norm, sup_base, method="sampling", rng=0)
        assert 4.0 <= est <= 5.0 + 1e-9

    def test_vertex_method_dimension_cap(self):
        K4 = orthant(4)
        base = base_monotone_norm(K4)
        v = NormApprox(np.eye(4), 1.0, 0, base, MONOTONE, K4, n_base_rows=4)
        with pytest.raises(MethodUnavailable):
            eccentricity(v, base)
        assert eccentricity(v, base, method="sampling", rng=0) == pytest.approx(1.0)

    def test_unknown_method_rejected(self, chain_norm):
        with pytest.raises(BadParams):
            eccentricity(chain_norm, method="oracle")


class TestInducedNorm:
    def test_involution_is_an_isometry_of_its_norm(self, flip_norm):
        assert induced_matrix_norm(FLIP, flip_norm) == pytest.approx(1.0, abs=1e-12)

    def test_consistency_with_vector_values(self, flip_norm):
        rng = np.random.default_rng(1)
        for _ in range(50):
            A = rng.normal(size=(2, 2))
            nA = induced_matrix_norm(A, flip_norm)
            for _ in range(5):
                x = rng.normal(size=2)
                assert flip_norm.value(A @ x) <= nA * flip_norm.value(x) + 1e-9

    def test_submultiplicative(self, flip_norm):
        rng = np.random.default_rng(2)
        for _ in range(30):
            A, B = rng.normal(size=(2, 2, 2))
            lhs = induced_matrix_norm(A @ B, flip_norm)
            rhs = induced_matrix_norm(A, flip_norm) * induced_matrix_norm(B, flip_norm)
            assert lhs <= rhs + 1e-9 * max(1.0, rhs)


class TestBoundedness:
    def test_permutation_family_is_bounded(self, K2, swap_family):
        rep = boundedness_diagnostic(swap_family, K2, 1.0, 8)
        assert not rep.growth_flag
        assert rep.max_norm == pytest.approx(1.0, abs=1e-12)
        assert rep.spectral_statistic == pytest.approx(1.0, abs=1e-12)
        assert rep.amplification["exceeding"] == 0
        assert rep.amplification["max"] == pytest.approx(1.0, abs=1e-12)
        assert len(rep.running_max) == 9 and rep.running_max[0] == 1.0

    def test_doubled_family_flags_growth(self, K2, swap_family):
        rep = boundedness_diagnostic([2.0 * SWAP, 2.0 * EYE2], K2, 1.0, 8)
        assert rep.growth_flag
        assert rep.max_norm == pytest.approx(256.0, rel=1e-12)
        assert rep.spectral_statistic == pytest.approx(2.0, abs=1e-12)
        assert rep.amplification["max"] == pytest.approx(384.0, rel=1e-12)
        assert rep.amplification["exceeding"] == 2**9 - 2
        assert rep.amplification["witness"] == (0,) * 8

    def test_golden_pair_bounded_at_its_radius(self, K2, golden_family):
        rep = boundedness_diagnostic(golden_family, K2, GOLDEN, 10)
        assert not rep.growth_flag
        assert rep.spectral_statistic == pytest.approx(1.0, abs=1e-9)

    def test_underestimated_rate_is_caught_spectrally(self, K2, golden_family):
        rep = boundedness_diagnostic(golden_family, K2, GOLDEN / 1.1, 10)
        assert rep.growth_flag
        assert rep.spectral_statistic == pytest.approx(1.1, abs=1e-9)
        # norm growth alone has not crossed the tenfold bar yet at this depth
        assert rep.running_max[10] <= 10.0 * rep.running_max[5]

    def test_reducible_family_has_no_witness(self, K2):
        with pytest.raises(FamilyReducible):
            boundedness_diagnostic([PAIR_A], K2, 1.0, 4)

    def test_rate_must_be_positive(self, K2, swap_family):
        with pytest.raises(BadParams):
            boundedness_diagnostic(swap_family, K2, 0.0, 4)
