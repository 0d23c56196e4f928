"""Core state algebra: construction, overlap, Schmidt, density matrices."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from photon_duality import (
    DensityMatrix,
    InternalState,
    PathLabel,
    TwoPathState,
    coefficient_matrix,
    concurrence_pure,
    internal_overlap,
    overlap,
    partial_trace,
    pure_state_fidelity,
    random_two_path_state,
    schmidt_decompose,
    state_vector,
    to_density_matrix,
    wootters_concurrence,
)

HALF = math.sqrt(0.5)


def balanced_state(phi_b=(0, 1)):
    return TwoPathState(HALF, HALF, InternalState([1, 0]), InternalState(phi_b))


class TestConstruction:
    def test_internal_state_requires_unit_norm(self):
        with pytest.raises(ValueError, match="norm"):
            InternalState([1.0, 1.0])

    def test_internal_state_rejects_tiny_norm_violation(self):
        # 1e-9 is the hard validation limit; 1e-6 off must be rejected.
        with pytest.raises(ValueError, match="norm"):
            InternalState([1.0 + 1e-6, 0.0])

    def test_internal_state_requires_dim_two_or_more(self):
        with pytest.raises(ValueError, match="dimension"):
            InternalState([1.0])

    def test_two_path_state_requires_normalized_amplitudes(self):
        with pytest.raises(ValueError, match=r"\|c_a\|"):
            TwoPathState(1.0, 1.0, InternalState([1, 0]), InternalState([0, 1]))

    def test_two_path_state_requires_matching_dims(self):
        with pytest.raises(ValueError, match="dimensions differ"):
            TwoPathState(1.0, 0.0, InternalState([1, 0]), InternalState([0, 1, 0]))

    def test_degenerate_amplitude_is_legal(self):
        s = TwoPathState(1.0, 0.0, InternalState([1, 0]), InternalState([0, 1]))
        assert overlap(s) == 0

    def test_amplitudes_are_read_only(self):
        s = balanced_state()
        with pytest.raises(ValueError):
            s.phi_a.amplitudes[0] = 2.0

    def test_path_label_has_exactly_two_values(self):
        assert {p.value for p in PathLabel} == {"A", "B"}


class TestOverlap:
    def test_identical_states(self):
        s = TwoPathState(HALF, HALF, InternalState([1, 0]), InternalState([1, 0]))
        assert overlap(s) == pytest.approx(1.0, abs=1e-12)

    def test_orthogonal_states(self):
        assert overlap(balanced_state()) == pytest.approx(0.0, abs=1e-12)

    def test_partial_overlap(self):
        s = balanced_state(phi_b=(HALF, HALF))
        assert overlap(s) == pytest.approx(1 / math.sqrt(2), abs=1e-12)

    def test_conjugate_linearity(self):
        a = InternalState([HALF, HALF * 1j])
        b = InternalState([1, 0])
        assert internal_overlap(a, b) == pytest.approx(np.conj(internal_overlap(b, a)))

    def test_dimension_mismatch_raises(self):
        with pytest.raises(ValueError, match="mismatch"):
            internal_overlap(InternalState([1, 0]), InternalState([1, 0, 0]))

    def test_magnitude_bounded_by_one(self):
        rng = np.random.default_rng(10)
        for _ in range(200):
            s = random_two_path_state(rng, dim=int(rng.integers(2, 6)))
            assert abs(overlap(s)) <= 1 + 1e-12


class TestSchmidt:
    def test_product_state(self):
        s = TwoPathState(1.0, 0.0, InternalState([1, 0]), InternalState([0, 1]))
        sd = schmidt_decompose(s)
        assert (sd.lambda1, sd.lambda2) == pytest.approx((1.0, 0.0), abs=1e-12)

    def test_maximally_entangled(self):
        sd = schmidt_decompose(balanced_state())
        assert (sd.lambda1, sd.lambda2) == pytest.approx((HALF, HALF), abs=1e-12)

    def test_partial_overlap_coefficients(self):
        # SVD of [[1/sqrt2, 0], [1/2, 1/2]]: cos/sin of pi/8.
        sd = schmidt_decompose(balanced_state(phi_b=(HALF, HALF)))
        assert sd.lambda1 == pytest.approx(0.9238795325112867, abs=1e-9)
        assert sd.lambda2 == pytest.approx(0.3826834323650898, abs=1e-9)
        # Cross-check: lambda1*lambda2 = |c_a c_b| sqrt(1 - |gamma|^2).
        assert sd.lambda1 * sd.lambda2 == pytest.approx(
            0.5 * math.sqrt(1 - 0.5), abs=1e-12
        )

    def test_reconstruction_over_random_states(self):
        rng = np.random.default_rng(11)
        for _ in range(1000):
            s = random_two_path_state(rng, dim=int(rng.integers(2, 5)))
            sd = schmidt_decompose(s)
            rebuilt = sd.lambda1 * np.outer(
                sd.path_basis[0], sd.internal_basis[0]
            ) + sd.lambda2 * np.outer(sd.path_basis[1], sd.internal_basis[1])
            assert np.linalg.norm(rebuilt - coefficient_matrix(s)) < 1e-10

    def test_weights_on_unit_circle(self):
        rng = np.random.default_rng(12)
        for _ in range(300):
            sd = schmidt_decompose(random_two_path_state(rng))
            assert sd.lambda1**2 + sd.lambda2**2 == pytest.approx(1.0, abs=1e-10)
            assert sd.lambda1 >= sd.lambda2 >= 0.0


class TestConcurrencePure:
    def test_product(self):
        s = TwoPathState(1.0, 0.0, InternalState([1, 0]), InternalState([0, 1]))
        assert concurrence_pure(schmidt_decompose(s)) == 0.0

    def test_maximal(self):
        assert concurrence_pure(schmidt_decompose(balanced_state())) == pytest.approx(
            1.0, abs=1e-12
        )

    def test_partial(self):
        sd = schmidt_decompose(balanced_state(phi_b=(HALF, HALF)))
        assert concurrence_pure(sd) == pytest.approx(1 / math.sqrt(2), abs=1e-9)


class TestDensityMatrix:
    def test_single_path_projector(self):
        s = TwoPathState(1.0, 0.0, InternalState([1, 0]), InternalState([1, 0]))
        rho = to_density_matrix(s)
        expected = np.zeros((4, 4))
        expected[0, 0] = 1.0
        np.testing.assert_allclose(rho.matrix, expected, atol=1e-15)

    def test_purity_one(self):
        rng = np.random.default_rng(13)
        for _ in range(200):
            rho = to_density_matrix(random_two_path_state(rng, dim=int(rng.integers(2, 5))))
            purity = np.trace(rho.matrix @ rho.matrix).real
            assert purity == pytest.approx(1.0, abs=1e-12)

    def test_bell_like_entries(self):
        rho = to_density_matrix(balanced_state())
        expected = np.zeros((4, 4))
        for i, j in ((0, 0), (0, 3), (3, 0), (3, 3)):
            expected[i, j] = 0.5
        np.testing.assert_allclose(rho.matrix, expected, atol=1e-12)

    def test_rejects_non_hermitian(self):
        mat = np.eye(4, dtype=complex) / 4
        mat[0, 1] = 0.1
        with pytest.raises(ValueError, match="Hermitian"):
            DensityMatrix(mat)

    def test_rejects_wrong_trace(self):
        with pytest.raises(ValueError, match="trace"):
            DensityMatrix(np.eye(4, dtype=complex))

    def test_rejects_negative_eigenvalues_by_default(self):
        mat = np.diag([0.6, 0.5, -0.05, -0.05]).astype(complex)
        with pytest.raises(ValueError, match="physical"):
            DensityMatrix(mat)
        unchecked = DensityMatrix(mat, check_positive=False)
        assert not unchecked.is_physical()


class TestPartialTrace:
    def test_single_path_state_path_marginal(self):
        s = TwoPathState(1.0, 0.0, InternalState([1, 0]), InternalState([1, 0]))
        reduced = partial_trace(to_density_matrix(s), keep="path")
        np.testing.assert_allclose(reduced, np.diag([1.0, 0.0]), atol=1e-12)

    def test_marked_state_path_marginal_is_diagonal(self):
        # Orthogonal internal tags erase path coherence in the marginal.
        s = TwoPathState(math.sqrt(0.7), math.sqrt(0.3), InternalState([1, 0]), InternalState([0, 1]))
        reduced = partial_trace(to_density_matrix(s), keep="path")
        np.testing.assert_allclose(reduced, np.diag([0.7, 0.3]), atol=1e-12)

    def test_trace_preserved(self):
        rng = np.random.default_rng(14)
        for keep in ("path", "internal"):
            rho = to_density_matrix(random_two_path_state(rng, dim=3))
            assert np.trace(partial_trace(rho, keep)).real == pytest.approx(1.0, abs=1e-12)

    def test_bell_like_gives_maximally_mixed_path(self):
        reduced = partial_trace(to_density_matrix(balanced_state()), keep="path")
        np.testing.assert_allclose(reduced, np.eye(2) / 2, atol=1e-12)

    def test_reduced_matrices_are_physical(self):
        rng = np.random.default_rng(15)
        for _ in range(300):
            rho = to_density_matrix(random_two_path_state(rng, dim=int(rng.integers(2, 5))))
            for keep in ("path", "internal"):
                red = partial_trace(rho, keep)
                assert np.max(np.abs(red - red.conj().T)) < 1e-12
                assert np.trace(red).real == pytest.approx(1.0, abs=1e-12)
                assert np.linalg.eigvalsh(red)[0] >= -1e-8

    def test_bad_keep_raises(self):
        with pytest.raises(ValueError, match="keep"):
            partial_trace(to_density_matrix(balanced_state()), keep="arm")


class TestWoottersConcurrence:
    def test_bell_projector(self):
        assert wootters_concurrence(to_density_matrix(balanced_state())) == pytest.approx(
            1.0, abs=1e-12
        )

    def test_product_state(self):
        s = TwoPathState(1.0, 0.0, InternalState([1, 0]), InternalState([0, 1]))
        assert wootters_concurrence(to_density_matrix(s)) == pytest.approx(0.0, abs=1e-12)

    def test_agrees_with_schmidt_route_on_random_states(self):
        rng = np.random.default_rng(16)
        for _ in range(1000):
            s = random_two_path_state(rng)
            via_schmidt = concurrence_pure(schmidt_decompose(s))
            via_wootters = wootters_concurrence(to_density_matrix(s))
            assert abs(via_schmidt - via_wootters) < 1e-9

    def test_rejects_higher_dimension(self):
        rho = to_density_matrix(random_two_path_state(np.random.default_rng(0), dim=3))
        with pytest.raises(ValueError, match="4 x 4"):
            wootters_concurrence(rho)

    def test_rejects_non_physical(self):
        rho = DensityMatrix(np.diag([0.6, 0.5, -0.05, -0.05]).astype(complex), check_positive=False)
        with pytest.raises(ValueError, match="physical"):
            wootters_concurrence(rho)


class TestGlobalPhaseInvariance:
    @settings(max_examples=100, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), theta=st.floats(-math.pi, math.pi))
    def test_derived_quantities_unchanged(self, seed, theta):
        rng = np.random.default_rng(seed)
        s = random_two_path_state(rng)
        phase = complex(math.cos(theta), math.sin(theta))
        rotated = TwoPathState(phase * s.c_a, phase * s.c_b, s.phi_a, s.phi_b)
        assert abs(overlap(rotated)) == pytest.approx(abs(overlap(s)), abs=1e-12)
        sd, sd_rot = schmidt_decompose(s), schmidt_decompose(rotated)
        assert sd_rot.lambda1 == pytest.approx(sd.lambda1, abs=1e-12)
        assert sd_rot.lambda2 == pytest.approx(sd.lambda2, abs=1e-12)
        assert wootters_concurrence(to_density_matrix(rotated)) == pytest.approx(
            wootters_concurrence(to_density_matrix(s)), abs=1e-9
        )


class TestFidelity:
    def test_self_fidelity(self):
        s = balanced_state()
        assert pure_state_fidelity(to_density_matrix(s), s) == pytest.approx(1.0, abs=1e-12)

    def test_orthogonal_fidelity(self):
        s = TwoPathState(1.0, 0.0, InternalState([1, 0]), InternalState([1, 0]))
        t = TwoPathState(0.0, 1.0, InternalState([1, 0]), InternalState([1, 0]))
        assert pure_state_fidelity(to_density_matrix(s), t) == pytest.approx(0.0, abs=1e-12)

    def test_state_vector_layout_is_path_major(self):
        s = TwoPathState(0.0, 1.0, InternalState([1, 0]), InternalState([0, 1]))
        np.testing.assert_allclose(state_vector(s), [0, 0, 0, 1], atol=1e-15)
