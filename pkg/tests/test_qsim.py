import math

import numpy as np
import pytest

from qtopo.numtheory import gauss_sum_brute
from qtopo.qsim import (
    PhaseEstimate,
    StateVector,
    apply_unitary,
    basis_state,
    estimate_report,
    gauss_phase_encode,
    legendre_amplitudes,
    phase_estimate,
    prepare_legendre_state,
    qft_matrix,
    qft_mod_k,
    qft_mod_k_inverse,
    sample_schedule,
    true_phase,
)


def circular_distance(a: float, b: float) -> float:
    return abs((a - b + math.pi) % (2.0 * math.pi) - math.pi)


class TestQft:
    def test_zero_state_goes_uniform(self):
        out = qft_mod_k(basis_state((3,), (0,)))
        assert np.allclose(out.amps, np.full(3, 1 / math.sqrt(3)), atol=1e-12)

    def test_one_state_phases(self):
        out = qft_mod_k(basis_state((3,), (1,)))
        w = np.exp(-2j * math.pi / 3)
        expected = np.array([1, w, w**2]) / math.sqrt(3)
        assert np.allclose(out.amps, expected, atol=1e-12)

    def test_inverse_round_trip(self):
        rng = np.random.default_rng(5)
        for k in (3, 5, 13):
            amps = rng.normal(size=k) + 1j * rng.normal(size=k)
            amps /= np.linalg.norm(amps)
            state = StateVector(dims=(k,), amps=amps)
            back = qft_mod_k_inverse(qft_mod_k(state))
            assert np.abs(back.amps - amps).max() < 1e-12

    def test_unitary_norm_drift(self):
        rng = np.random.default_rng(11)
        k = 7
        amps = rng.normal(size=k) + 1j * rng.normal(size=k)
        amps /= np.linalg.norm(amps)
        state = StateVector(dims=(k,), amps=amps)
        for _ in range(100):
            a = int(rng.choice([x for x in range(1, k) if math.gcd(x, k) == 1]))
            state = apply_unitary(state, qft_matrix(k, a), 0)
        assert abs(state.norm() - 1.0) < 1e-10

    def test_scaled_matrix_requires_coprime_parameter(self):
        with pytest.raises(ValueError):
            qft_matrix(6, 2)

    def test_register_out_of_range(self):
        with pytest.raises(ValueError):
            qft_mod_k(basis_state((3,), (0,)), reg=1)


class TestPrepareLegendreState:
    def test_k5_amplitudes(self):
        state = prepare_legendre_state(5)
        expected = np.array([0.0, 0.5, -0.5, -0.5, 0.5])
        assert np.abs(state.amps - expected).max() < 1e-10

    def test_k3_amplitudes(self):
        state = prepare_legendre_state(3)
        expected = np.array([0.0, 1.0, -1.0]) / math.sqrt(2)
        assert np.abs(state.amps - expected).max() < 1e-10

    def test_normalized_with_zero_vacancy(self):
        for k in (3, 5, 7, 11, 13):
            state = prepare_legendre_state(k)
            assert abs(state.norm() - 1.0) < 1e-10
            assert state.amps[0] == 0.0

    def test_matches_character_table(self):
        for k in (7, 11):
            assert np.abs(prepare_legendre_state(k).amps - legendre_amplitudes(k)).max() < 1e-10

    @pytest.mark.parametrize("k", [4, 9, 15, 2])
    def test_rejects_non_prime(self, k):
        with pytest.raises(ValueError):
            prepare_legendre_state(k)


class TestGaussPhaseEncode:
    @pytest.mark.parametrize(
        "k,a,expected",
        [
            (5, 1, 1.0 + 0.0j),
            (5, 2, -1.0 + 0.0j),
            (3, 1, -1.0j),
        ],
    )
    def test_global_phase(self, k, a, expected):
        chi = prepare_legendre_state(k)
        out = gauss_phase_encode(chi, a)
        overlap = np.vdot(chi.amps, out.amps)
        assert abs(overlap - expected) < 1e-9

    def test_fidelity_and_phase_all_small_primes(self):
        for k in (3, 5, 7, 11, 13):
            chi = prepare_legendre_state(k)
            for a in range(1, k):
                out = gauss_phase_encode(chi, a)
                overlap = np.vdot(chi.amps, out.amps)
                assert abs(abs(overlap) - 1.0) < 1e-9
                expected = gauss_sum_brute(k, a) / math.sqrt(k)
                assert circular_distance(float(np.angle(overlap)), float(np.angle(expected))) < 1e-9

    def test_rejects_non_coprime(self):
        with pytest.raises(ValueError):
            gauss_phase_encode(prepare_legendre_state(5), 10)

    def test_rejects_non_character_state(self):
        state = basis_state((5,), (1,))
        with pytest.raises(ValueError):
            gauss_phase_encode(state, 2)


class TestPhaseEstimate:
    def test_schedule(self):
        assert sample_schedule(0.05) == math.ceil(8 * math.log(40) / 0.05**2)
        with pytest.raises(ValueError):
            sample_schedule(0.0)
        with pytest.raises(ValueError):
            sample_schedule(1.5)

    @pytest.mark.parametrize(
        "k,a,target",
        [
            (5, 2, math.pi),
            (5, 1, 0.0),
            (3, 1, -math.pi / 2),
        ],
    )
    def test_documented_estimates(self, k, a, target):
        est = phase_estimate(k, a, 0.05, seed=7)
        assert circular_distance(est.phi, target) <= 0.05
        assert -math.pi < est.phi <= math.pi

    def test_confidence_interval_meets_target(self):
        est = phase_estimate(5, 2, 0.05, seed=0)
        assert isinstance(est, PhaseEstimate)
        assert est.ci_halfwidth <= est.epsilon
        assert est.samples == sample_schedule(0.05)

    def test_deterministic_given_seed(self):
        a = phase_estimate(7, 3, 0.05, seed=123)
        b = phase_estimate(7, 3, 0.05, seed=123)
        assert a == b

    def test_seed_changes_samples(self):
        a = phase_estimate(7, 3, 0.3, seed=1)
        b = phase_estimate(7, 3, 0.3, seed=2)
        assert a.phi != b.phi  # overwhelmingly likely at this shot count

    def test_epsilon_validation(self):
        with pytest.raises(ValueError):
            phase_estimate(5, 2, 0.0)

    def test_non_coprime_rejected(self):
        with pytest.raises(ValueError):
            phase_estimate(5, 5, 0.05)

    def test_true_phase_from_brute_force(self):
        for k, a in ((5, 1), (5, 2), (7, 3), (13, 5)):
            expected = np.angle(gauss_sum_brute(k, a) / math.sqrt(k))
            assert circular_distance(true_phase(k, a), float(expected)) == 0.0

    def test_report_fields(self):
        report = estimate_report(5, 2, 0.05, seed=7)
        assert set(report) == {"k", "a", "phi_hat", "phi_true", "epsilon", "samples", "seed"}
        assert circular_distance(report["phi_hat"], report["phi_true"]) <= 0.05
