import math

import numpy as np
import pytest

from qjjlab.deform import Deformation
from qjjlab.errors import ConfigurationError
from qjjlab.grids import gaussian_wavepacket, interior_residual, make_grid, phase_function_operator
from qjjlab.rates import generalized_rate, standard_rate
from qjjlab.ring import RingParams, build_ring_hamiltonian, ring_rate_phi, spectrum


def free_levels(grid, r, k):
    """Closed-form rotor levels (m + s/2)^2 / (2 M) on the charge window."""
    vals = (grid.charge_values + 0.5 * r.s) ** 2 / (2.0 * r.inertia)
    return np.sort(vals)[:k]


class TestRingHamiltonian:
    def test_free_rotor_levels(self, grid64):
        r = RingParams(inertia=1.0, v0=0.0, s=0.0)
        h = build_ring_hamiltonian(grid64, r)
        eigs = np.sort(np.linalg.eigvalsh(h.entries))[:10]
        assert np.abs(eigs - free_levels(grid64, r, 10)).max() <= 1e-12

    def test_half_flux_pairs_levels(self, grid64):
        # s = 1 doubles every level: m and -m-1 coincide
        r = RingParams(inertia=1.0, v0=0.0, s=1.0)
        h = build_ring_hamiltonian(grid64, r)
        eigs = np.sort(np.linalg.eigvalsh(h.entries))[:8]
        assert np.abs(eigs - free_levels(grid64, r, 8)).max() <= 1e-12
        assert eigs[0] == pytest.approx(eigs[1], abs=1e-12)
        assert eigs[0] == pytest.approx(0.125, abs=1e-12)

    def test_grid_refinement_oracle(self):
        r = RingParams(inertia=1.0, v0=1.0, s=0.0)
        coarse = np.sort(np.linalg.eigvalsh(build_ring_hamiltonian(make_grid(128), r).entries))[:6]
        fine = np.sort(np.linalg.eigvalsh(build_ring_hamiltonian(make_grid(256), r).entries))[:6]
        assert np.abs(coarse - fine).max() <= 1e-9

    def test_parameter_validation(self):
        with pytest.raises(ConfigurationError):
            RingParams(inertia=0.0)
        with pytest.raises(ConfigurationError):
            RingParams(v0=-1.0)


class TestRingRate:
    def test_no_flux_is_rotation_speed(self, grid64):
        from qjjlab.grids import number_operator

        r = RingParams(inertia=2.0, v0=0.5, s=0.0)
        got = ring_rate_phi(grid64, r)
        expected = number_operator(grid64).entries / 2.0
        assert np.abs(got.entries - expected).max() <= 1e-14

    def test_flux_adds_constant_offset(self, grid64):
        r0 = ring_rate_phi(grid64, RingParams(inertia=1.0, s=0.0))
        r1 = ring_rate_phi(grid64, RingParams(inertia=1.0, s=1.0))
        assert np.abs(r1.entries - r0.entries - 0.5 * np.eye(grid64.size)).max() <= 1e-14

    @pytest.mark.parametrize("s", [1.0, 2.0])
    def test_operator_identity_on_interior(self, grid256, s):
        # deformed angle rate under the undeformed rotor equals the closed form
        r = RingParams(inertia=1.0, v0=1.0, s=s)
        h = build_ring_hamiltonian(grid256, RingParams(inertia=1.0, v0=1.0, s=0.0))
        phi_op = phase_function_operator(grid256, "angle")
        gen = generalized_rate(phi_op, h, Deformation(s))
        assert interior_residual(grid256, gen, ring_rate_phi(grid256, r), 64) <= 1e-10

    @pytest.mark.parametrize("s", [0.7, 1.0, 2.0])
    def test_equivalence_at_wavepacket_level(self, grid256, s):
        # standard rate under the flux Hamiltonian matches the closed form
        # on cut-avoiding packets for any s
        r = RingParams(inertia=1.0, v0=1.0, s=s)
        h_s = build_ring_hamiltonian(grid256, r)
        phi_op = phase_function_operator(grid256, "angle")
        lhs = standard_rate(phi_op, h_s)
        rhs = ring_rate_phi(grid256, r)
        psi = gaussian_wavepacket(grid256, 0.4, 2.0, 0.3)
        dev = abs(np.vdot(psi.amplitudes, (lhs.entries - rhs.entries) @ psi.amplitudes))
        assert dev <= 1e-6


class TestSpectrum:
    def test_free_rotor_closed_form(self, grid64):
        r = RingParams(inertia=1.0, v0=0.0, s=0.6)
        result = spectrum(grid64, r, 8)
        assert result.converged
        assert np.abs(result.energies - free_levels(make_grid(result.grid_size), r, 8)).max() <= 1e-12

    def test_convergence_protocol(self):
        r = RingParams(inertia=1.0, v0=1.0, s=0.3)
        result = spectrum(make_grid(128), r, 10)
        assert result.converged
        assert result.grid_size == 256

    def test_nonconvergence_flagged(self):
        r = RingParams(inertia=1.0, v0=1.0, s=0.3)
        result = spectrum(make_grid(128), r, 10, max_size=128, atol=1e-16)
        assert not result.converged

    def test_too_many_levels_rejected(self, grid64):
        with pytest.raises(ConfigurationError):
            spectrum(grid64, RingParams(), 100)

    @pytest.mark.parametrize("s", [0.0, 0.3, 1.0, math.pi])
    def test_flux_quantum_periodicity(self, grid128, s):
        r_a = RingParams(inertia=1.0, v0=1.0, s=s)
        r_b = RingParams(inertia=1.0, v0=1.0, s=s + 2.0)
        e_a = spectrum(grid128, r_a, 10).energies
        e_b = spectrum(grid128, r_b, 10).energies
        assert np.abs(e_a - e_b).max() <= 1e-8

    @pytest.mark.parametrize("s", [0.3, 1.0, 2.5])
    def test_flux_reflection_symmetry(self, grid128, s):
        e_plus = spectrum(grid128, RingParams(inertia=1.0, v0=1.0, s=s), 10).energies
        e_minus = spectrum(grid128, RingParams(inertia=1.0, v0=1.0, s=-s), 10).energies
        assert np.abs(e_plus - e_minus).max() <= 1e-8
