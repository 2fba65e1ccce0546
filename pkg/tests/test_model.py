"""Matrix builders, eigensystem and observables."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sastirap.model import (
    ThreeLevelState,
    angle_frame,
    build_h0,
    build_hcd,
    build_heps,
    eigensystem,
    mixing_angle,
    numeric_hcd_oracle,
    populations,
)
from sastirap.pulses import sample_gaussian, sample_sincos
from sastirap.pulses import ProtocolConfig, PulseFamily, theta_gaussian, theta_sincos

rates = st.floats(min_value=0.0, max_value=100.0, allow_nan=False)
angles = st.floats(min_value=0.0, max_value=math.pi / 2, allow_nan=False)


class TestBuildH0:
    def test_all_off_is_zero(self):
        assert np.array_equal(build_h0(0.0, 0.0, 0.0), np.zeros((3, 3)))

    def test_structure(self):
        m = build_h0(1.5, 2.5, 0.5)
        expected = np.array(
            [[0, 1.5, 0], [1.5, -0.5j, 2.5], [0, 2.5, 0]], dtype=complex
        )
        assert np.array_equal(m, expected)

    def test_3_4_5_eigenvalues(self):
        # independent eigensolver oracle
        eigs = np.sort(np.linalg.eigvalsh(build_h0(3.0, 4.0, 0.0)))
        assert eigs == pytest.approx([-5.0, 0.0, 5.0], abs=1e-12)

    @given(omega_p=rates, omega_s=rates)
    def test_hermitian_eigenvalues_lossless(self, omega_p, omega_s):
        m = build_h0(omega_p, omega_s, 0.0)
        assert np.array_equal(m, m.conj().T)
        omega = math.hypot(omega_p, omega_s)
        eigs = np.sort(np.linalg.eigvalsh(m))
        assert eigs == pytest.approx([-omega, 0.0, omega], abs=1e-9 * max(1, omega))

    def test_lossy_part_is_antihermitian_shift(self):
        m = build_h0(2.0, 3.0, 4.0)
        hermitian_part = m - np.diag([0.0, -4.0j, 0.0])
        assert np.array_equal(hermitian_part, hermitian_part.conj().T)

    @pytest.mark.parametrize("bad", [(-1, 0, 0), (0, -1, 0), (0, 0, -1)])
    def test_negative_inputs_rejected(self, bad):
        with pytest.raises(ValueError):
            build_h0(*bad)


class TestBuildHcd:
    def test_zero(self):
        assert np.array_equal(build_hcd(0.0), np.zeros((3, 3)))

    @given(omega_d=st.floats(-100, 100, allow_nan=False))
    def test_hermitian(self, omega_d):
        m = build_hcd(omega_d)
        assert np.array_equal(m, m.conj().T)

    def test_pi_eigenvalues(self):
        eigs = np.sort(np.linalg.eigvalsh(build_hcd(math.pi)))
        assert eigs == pytest.approx([-math.pi, 0.0, math.pi], abs=1e-12)


class TestBuildHeps:
    def test_zero(self):
        assert np.array_equal(build_heps(0.0, 0.0, 0.0), np.zeros((3, 3)))

    def test_uniform_is_identity_multiple(self):
        assert np.array_equal(build_heps(2.5, 2.5, 2.5), 2.5 * np.eye(3))

    def test_diagonal_entries(self):
        m = build_heps(1.0, -2.0, 0.5)
        assert np.array_equal(m, np.diag([1.0, -2.0, 0.5]))


class TestMixingAngle:
    def test_pump_off(self):
        assert mixing_angle(0.0, 3.0) == 0.0

    def test_stokes_off(self):
        assert mixing_angle(3.0, 0.0) == pytest.approx(math.pi / 2)

    def test_equal_drives(self):
        assert mixing_angle(1.0, 1.0) == pytest.approx(math.pi / 4)

    def test_both_zero_rejected(self):
        with pytest.raises(ValueError):
            mixing_angle(0.0, 0.0)

    @given(omega_p=rates, omega_s=rates)
    def test_range_and_tangent(self, omega_p, omega_s):
        if omega_p == 0.0 and omega_s == 0.0:
            return
        theta = mixing_angle(omega_p, omega_s)
        assert 0.0 <= theta <= math.pi / 2
        # tan(theta) = omega_p / omega_s, in the cross form that stays
        # well-conditioned as theta -> pi/2
        assert math.sin(theta) * omega_s == pytest.approx(
            math.cos(theta) * omega_p, rel=1e-9, abs=1e-12
        )

    @given(omega_p=rates, omega_s=rates)
    def test_angle_frame(self, omega_p, omega_s):
        if omega_p == 0.0 and omega_s == 0.0:
            return
        frame = angle_frame(omega_p, omega_s)
        assert frame.omega**2 == pytest.approx(
            omega_p**2 + omega_s**2, rel=1e-12, abs=1e-12
        )


class TestEigensystem:
    def test_initial_angle_selects_level_one(self):
        sys = eigensystem(0.0, 1.0)
        assert sys.phi0 == pytest.approx([1.0, 0.0, 0.0])

    def test_final_angle_selects_level_three(self):
        sys = eigensystem(math.pi / 2, 1.0)
        assert sys.phi0 == pytest.approx([0.0, 0.0, -1.0], abs=1e-15)

    def test_energies(self):
        sys = eigensystem(0.3, 7.0)
        assert (sys.e0, sys.e_plus, sys.e_minus) == (0.0, 3.5, -3.5)

    @given(theta=angles, omega=st.floats(0.0, 100.0, allow_nan=False))
    def test_dark_state_annihilation(self, theta, omega):
        sys = eigensystem(theta, omega)
        m = build_h0(omega * math.sin(theta), omega * math.cos(theta), 0.0)
        assert np.max(np.abs(m @ sys.phi0)) <= 1e-12 * max(1.0, omega)

    @given(theta=angles)
    def test_orthonormality(self, theta):
        sys = eigensystem(theta, 1.0)
        basis = np.column_stack([sys.phi0, sys.phi_plus, sys.phi_minus])
        assert np.max(np.abs(basis.T @ basis - np.eye(3))) <= 1e-12

    @given(theta=angles, omega=st.floats(0.1, 100.0, allow_nan=False))
    def test_bright_state_eigenvalue(self, theta, omega):
        sys = eigensystem(theta, omega)
        m = build_h0(omega * math.sin(theta), omega * math.cos(theta), 0.0)
        # eigenvalues of M are twice the energies of H = M/2
        assert m @ sys.phi_plus == pytest.approx(omega * sys.phi_plus, abs=1e-9 * omega)


class TestCounterdiabaticOracle:
    def test_constant_angle_gives_zero(self):
        m = numeric_hcd_oracle(lambda t: 0.7, t=0.3, dt_fd=1e-5)
        assert np.max(np.abs(m)) <= 1e-10

    def test_gaussian_center_value(self):
        tau = 0.75
        m = numeric_hcd_oracle(lambda t: theta_gaussian(t, tau), t=0.0, dt_fd=1e-6)
        assert m[0, 2] == pytest.approx(4j * tau, rel=1e-8)

    def test_sincos_constant_drive(self):
        for t in (0.1, 0.5, 0.9):
            m = numeric_hcd_oracle(theta_sincos, t=t, dt_fd=1e-6)
            assert m[0, 2] == pytest.approx(1j * math.pi, rel=1e-8)

    def test_matches_builder_along_both_protocols(self):
        # finite differences of the eigenvectors against the closed form,
        # 100 sample times per protocol
        tau = 0.75
        gauss = ProtocolConfig(PulseFamily.GAUSSIAN, omega0=5.0, tau=tau)
        for t in np.linspace(-3.0, 3.0, 100):
            oracle = numeric_hcd_oracle(lambda u: theta_gaussian(u, tau), t, 1e-5)
            built = build_hcd(sample_gaussian(t, gauss).omega_d)
            assert np.max(np.abs(oracle - built)) <= 1e-6
        sincos = ProtocolConfig(PulseFamily.SINCOS, omega0=5.0)
        for t in np.linspace(0.0, 1.0, 100):
            oracle = numeric_hcd_oracle(theta_sincos, t, 1e-5)
            built = build_hcd(sample_sincos(t, sincos).omega_d)
            assert np.max(np.abs(oracle - built)) <= 1e-6


class TestPopulations:
    def test_ground_state(self):
        assert populations(ThreeLevelState(1.0, 0.0, 0.0)) == (1.0, 0.0, 0.0, 1.0)

    def test_phase_insensitive(self):
        assert populations(ThreeLevelState(0.0, 0.0, 1.0j)) == (0.0, 0.0, 1.0, 1.0)

    def test_superposition(self):
        inv = 1.0 / math.sqrt(2.0)
        p1, p2, p3, total = populations(ThreeLevelState(inv, 0.0, inv))
        assert (p1, p2, p3, total) == pytest.approx((0.5, 0.0, 0.5, 1.0))
