import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_hermitian, random_state
from holobound.core import (
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    Projector,
    StateVector,
    bloch_vector,
    bloch_vectors,
    expectation,
    instantaneous_profiles,
    occupation_profile,
    qubit_hamiltonian,
    qubit_state,
    rabi_vector,
    spectral_decompose,
    uncertainty,
    variance,
)
from holobound.errors import DimensionError, NonHermitianError

KET0 = np.array([1, 0], dtype=complex)
KET1 = np.array([0, 1], dtype=complex)
PLUS = (KET0 + KET1) / math.sqrt(2)

seeds = st.integers(min_value=0, max_value=2**32 - 1)
dims = st.integers(min_value=2, max_value=6)


class TestStateVector:
    def test_normalizes(self):
        psi = StateVector([3, 4j])
        assert np.linalg.norm(psi.amplitudes) == pytest.approx(1.0, abs=1e-12)

    def test_rejects_zero_vector(self):
        with pytest.raises(ValueError):
            StateVector([0, 0])

    def test_rejects_scalar_space(self):
        with pytest.raises(DimensionError):
            StateVector([1.0])

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            StateVector([np.nan, 1])

    def test_projector_from_state(self):
        p = Projector.from_state(PLUS)
        np.testing.assert_allclose(p.matrix, np.full((2, 2), 0.5), atol=1e-12)

    def test_projector_rejects_non_idempotent(self):
        with pytest.raises(ValueError):
            Projector(np.eye(2, dtype=complex))

    @given(seeds, dims)
    def test_projector_invariants(self, seed, dim):
        psi = StateVector(random_state(np.random.default_rng(seed), dim))
        p = psi.projector()
        np.testing.assert_allclose(p @ p, p, atol=1e-10)
        np.testing.assert_allclose(p, p.conj().T, atol=1e-10)
        assert np.trace(p).real == pytest.approx(1.0, abs=1e-10)


class TestSpectralDecompose:
    def test_sigma_z(self):
        h = spectral_decompose(SIGMA_Z)
        np.testing.assert_allclose(h.eigenvalues, [-1, 1], atol=1e-12)
        assert abs(np.vdot(h.eigenvectors[:, 0], KET0)) == pytest.approx(1.0, abs=1e-12)
        assert abs(np.vdot(h.eigenvectors[:, 1], KET1)) == pytest.approx(1.0, abs=1e-12)

    def test_identity(self):
        h = spectral_decompose(np.eye(3))
        np.testing.assert_allclose(h.eigenvalues, [1, 1, 1], atol=1e-12)
        assert len(h.levels()) == 1

    def test_sigma_x_matches_closed_form(self):
        # 2x2 closed form: eigenvalues (a+d)/2 -+ sqrt(((a-d)/2)^2 + |b|^2)
        h = spectral_decompose(SIGMA_X)
        np.testing.assert_allclose(h.eigenvalues, [-1, 1], atol=1e-12)
        minus = (KET0 - KET1) / math.sqrt(2)
        assert abs(np.vdot(h.eigenvectors[:, 0], minus)) == pytest.approx(1.0, abs=1e-12)
        assert abs(np.vdot(h.eigenvectors[:, 1], PLUS)) == pytest.approx(1.0, abs=1e-12)

    @given(seeds)
    def test_two_by_two_closed_form(self, seed):
        rng = np.random.default_rng(seed)
        a, d = rng.normal(size=2)
        b = complex(*rng.normal(size=2))
        m = np.array([[a, b], [np.conj(b), d]])
        r = math.sqrt(((a - d) / 2) ** 2 + abs(b) ** 2)
        expected = [(a + d) / 2 - r, (a + d) / 2 + r]
        np.testing.assert_allclose(spectral_decompose(m).eigenvalues, expected, atol=1e-12)

    def test_rejects_non_hermitian(self):
        with pytest.raises(NonHermitianError) as exc:
            spectral_decompose(np.array([[0, 1], [0, 0]], dtype=complex))
        assert exc.value.asymmetry > 0

    def test_rejects_non_square(self):
        with pytest.raises(DimensionError):
            spectral_decompose(np.zeros((2, 3)))

    @given(seeds, dims)
    def test_reconstruction_and_unitarity(self, seed, dim):
        m = random_hermitian(np.random.default_rng(seed), dim)
        h = spectral_decompose(m)
        v = h.eigenvectors
        np.testing.assert_allclose(v @ np.diag(h.eigenvalues) @ v.conj().T, m, atol=1e-10)
        np.testing.assert_allclose(v.conj().T @ v, np.eye(dim), atol=1e-10)
        assert np.all(np.diff(h.eigenvalues) >= 0)


class TestMoments:
    def test_sigma_z_on_plus(self):
        assert expectation(SIGMA_Z, PLUS) == pytest.approx(0.0, abs=1e-12)
        assert variance(SIGMA_Z, PLUS) == pytest.approx(1.0, abs=1e-12)

    def test_eigenvector_has_zero_variance(self):
        assert variance(SIGMA_Z, KET1) == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("phi", [0.3, math.pi / 3, 1.9, 2.8])
    @pytest.mark.parametrize("omega", [0.5, 1.0, 2.0])
    def test_qubit_uncertainty(self, phi, omega):
        h = qubit_hamiltonian((0, 0, omega))
        assert uncertainty(h, qubit_state(phi)) == pytest.approx(omega * math.sin(phi) / 2, abs=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            expectation(np.eye(3), PLUS)


class TestOccupationProfile:
    @pytest.mark.parametrize("phi", [0.4, math.pi / 2, 2.5])
    @pytest.mark.parametrize("trace", [0.0, 1.3])
    def test_qubit_profile(self, phi, trace):
        omega = 1.7
        prof = occupation_profile(qubit_hamiltonian((0, 0, omega), trace), qubit_state(phi))
        np.testing.assert_allclose(prof.energies, [(trace - omega) / 2, (trace + omega) / 2], atol=1e-12)
        assert prof.expected_energy == pytest.approx((trace + omega * math.cos(phi)) / 2, abs=1e-12)
        assert prof.gap_below() == pytest.approx(omega / 2 * (1 + math.cos(phi)), abs=1e-12)
        assert prof.gap_above() == pytest.approx(omega / 2 * (1 - math.cos(phi)), abs=1e-12)

    def test_eigenvector_is_stationary(self):
        prof = occupation_profile(SIGMA_Z, KET0)
        assert prof.n_occupied == 1
        assert prof.eps_bar is None and prof.eps_underbar is None
        assert prof.is_stationary

    def test_mean_on_middle_level_excludes_it(self):
        h = np.diag([0.0, 1.0, 2.0])
        prof = occupation_profile(h, [1, 1, 1])
        assert prof.expected_energy == pytest.approx(1.0)
        assert prof.eps_bar == 0.0 and prof.eps_underbar == 2.0

    def test_degenerate_levels_are_merged(self):
        h = np.diag([0.0, 1.0, 1.0 + 1e-12])
        prof = occupation_profile(h, [1, 1, 1])
        assert prof.n_occupied == 2
        assert prof.occupations[1] == pytest.approx(2 / 3)

    @given(seeds, dims)
    def test_profile_invariants(self, seed, dim):
        rng = np.random.default_rng(seed)
        h, psi = random_hermitian(rng, dim), random_state(rng, dim)
        prof = occupation_profile(h, psi)
        assert prof.occupations.sum() == pytest.approx(1.0, abs=1e-10)
        if prof.eps_bar is not None:
            assert prof.eps_min <= prof.eps_bar < prof.expected_energy
        if prof.eps_underbar is not None:
            assert prof.expected_energy < prof.eps_underbar <= prof.eps_max

    @given(seeds, dims, st.floats(0, 2 * math.pi))
    def test_global_phase_invariance(self, seed, dim, alpha):
        rng = np.random.default_rng(seed)
        h, psi = random_hermitian(rng, dim), random_state(rng, dim)
        a = occupation_profile(h, psi)
        b = occupation_profile(h, np.exp(1j * alpha) * psi)
        np.testing.assert_allclose(a.occupations, b.occupations, atol=1e-12)

    @given(seeds)
    def test_degenerate_basis_rotation_invariance(self, seed):
        rng = np.random.default_rng(seed)
        # a degenerate pair, with the eigenbasis inside it rotated at random
        q, _ = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
        basis = np.eye(3, dtype=complex)
        basis[:2, :2] = q
        h1 = np.diag([1.0, 1.0, 3.0]).astype(complex)
        h2 = basis @ h1 @ basis.conj().T
        psi = random_state(rng, 3)
        np.testing.assert_allclose(
            occupation_profile(h1, psi).occupations, occupation_profile(h2, psi).occupations, atol=1e-10
        )

    @given(seeds, dims)
    def test_bhatia_davies_inequality(self, seed, dim):
        rng = np.random.default_rng(seed)
        h, psi = random_hermitian(rng, dim), random_state(rng, dim)
        assert variance(h, psi) <= occupation_profile(h, psi).bhatia_davies() + 1e-10

    @given(seeds, dims)
    def test_bhatia_davies_equality_for_two_levels(self, seed, dim):
        rng = np.random.default_rng(seed)
        h = random_hermitian(rng, dim)
        vecs = np.linalg.eigh(h)[1]
        i, j = rng.choice(dim, size=2, replace=False)
        c = random_state(rng, 2)
        psi = c[0] * vecs[:, i] + c[1] * vecs[:, j]
        assert variance(h, psi) == pytest.approx(occupation_profile(h, psi).bhatia_davies(), abs=1e-9)

    @given(seeds, dims)
    def test_zero_variance_iff_single_level(self, seed, dim):
        rng = np.random.default_rng(seed)
        h = random_hermitian(rng, dim)
        vec = np.linalg.eigh(h)[1][:, rng.integers(dim)]
        assert variance(h, vec) == pytest.approx(0.0, abs=1e-10)
        assert occupation_profile(h, vec).n_occupied == 1
        psi = random_state(rng, dim)
        assert occupation_profile(h, psi).n_occupied > 1
        assert variance(h, psi) > 1e-10


class TestBlochRabi:
    def test_ground_is_south_pole(self):
        np.testing.assert_allclose(bloch_vector(KET0).as_array(), [0, 0, -1], atol=1e-12)

    def test_plus_state(self):
        np.testing.assert_allclose(bloch_vector(PLUS).as_array(), [1, 0, 0], atol=1e-12)

    def test_rabi_of_sigma_z(self):
        omega = 1.3
        np.testing.assert_allclose(rabi_vector(omega / 2 * SIGMA_Z).as_array(), [0, 0, omega], atol=1e-12)

    def test_qubit_hamiltonian_round_trip(self):
        h = qubit_hamiltonian((0.3, -0.2, 1.1), trace=0.7)
        np.testing.assert_allclose(rabi_vector(h).as_array(), [0.3, -0.2, 1.1], atol=1e-12)
        assert np.trace(h).real == pytest.approx(0.7)

    @pytest.mark.parametrize("phi", [0.2, 1.0, 2.5])
    def test_qubit_state_polar_angle(self, phi):
        assert bloch_vector(qubit_state(phi)).polar_angle == pytest.approx(phi, abs=1e-12)

    def test_rejects_higher_dimension(self):
        with pytest.raises(DimensionError):
            bloch_vector([1, 0, 0])

    @given(seeds)
    def test_pure_state_norm(self, seed):
        psi = random_state(np.random.default_rng(seed), 2)
        assert bloch_vector(psi).norm == pytest.approx(1.0, abs=1e-10)

    @given(seeds)
    def test_vectorized_matches_scalar(self, seed):
        rng = np.random.default_rng(seed)
        states = np.array([random_state(rng, 2) for _ in range(5)])
        expected = [bloch_vector(s).as_array() for s in states]
        np.testing.assert_allclose(bloch_vectors(states), expected, atol=1e-12)

    def test_paulis_satisfy_algebra(self):
        for s in (SIGMA_X, SIGMA_Y, SIGMA_Z):
            np.testing.assert_allclose(s @ s, np.eye(2), atol=1e-15)


def test_instantaneous_profiles_match_single_profile(rng):
    h = random_hermitian(rng, 4)
    evals, evecs = np.linalg.eigh(h)
    states = np.array([random_state(rng, 4) for _ in range(6)])
    out = instantaneous_profiles(np.tile(evals, (6, 1)), np.tile(evecs, (6, 1, 1)), states)
    for k, psi in enumerate(states):
        prof = occupation_profile(h, psi)
        assert out["energy"][k] == pytest.approx(prof.expected_energy, abs=1e-12)
        assert out["eps_bar"][k] == pytest.approx(prof.eps_bar, abs=1e-12)
        assert out["eps_underbar"][k] == pytest.approx(prof.eps_underbar, abs=1e-12)
        assert out["variance"][k] == pytest.approx(variance(h, psi), abs=1e-12)
