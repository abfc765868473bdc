import numpy as np
import pytest

from qjjlab.deform import Deformation
from qjjlab.grids import charge_state, to_charge_matrix
from qjjlab.qplane import dual_basis, ladder_action_table, verify_qplane


class TestVerifyQPlane:
    def test_commensurate_deformation_is_exact(self, grid256):
        s = 2.0 * np.pi * 3 / grid256.size
        report = verify_qplane(grid256, Deformation(s))
        assert report.commensurate
        assert report.residual_full <= 1e-12

    def test_incommensurate_wrap_factor(self, grid256):
        report = verify_qplane(grid256, Deformation(1.0))
        assert not report.commensurate
        assert report.residual_interior <= 1e-12
        assert report.offwrap_residual <= 1e-12
        assert abs(report.wrap_residual - report.wrap_expected) <= 1e-10
        assert report.residual_full == pytest.approx(report.wrap_expected, abs=1e-10)

    def test_no_deformation_commutes_exactly(self, grid128):
        report = verify_qplane(grid128, Deformation(0.0))
        assert report.residual_full == 0.0

    @pytest.mark.parametrize("s", [0.3, 1.0, 2.2, np.pi])
    def test_interior_bounded_by_full(self, grid128, s):
        report = verify_qplane(grid128, Deformation(s))
        assert report.residual_interior <= report.residual_full + 1e-15

    def test_exchange_unitaries(self, grid128):
        # both sides of the relation are built from unitary factors
        for s in (0.5, 1.7):
            x = grid128.dft_matrix.conj().T @ (
                np.exp(1j * s * grid128.charge_values)[:, None] * grid128.dft_matrix
            )
            assert np.abs(x.conj().T @ x - np.eye(grid128.size)).max() <= 1e-12
        y = np.diag(np.exp(1j * grid128.phi_points))
        assert np.abs(y.conj().T @ y - np.eye(grid128.size)).max() <= 1e-12


class TestLadderTable:
    def test_raising_action(self, grid64):
        table = ladder_action_table(grid64)
        by_n = {row[0]: row for row in table}
        assert by_n[0][1] == 1
        assert abs(abs(by_n[0][2]) - 1.0) <= 1e-12

    def test_wrap_row_reported(self, grid64):
        table = ladder_action_table(grid64)
        top = grid64.size // 2 - 1
        by_n = {row[0]: row for row in table}
        assert by_n[top][1] == -grid64.size // 2
        assert abs(abs(by_n[top][2]) - 1.0) <= 1e-12

    def test_lowering_action(self, grid64):
        table = ladder_action_table(grid64, direction=-1)
        by_n = {row[0]: row for row in table}
        assert by_n[0][1] == -1

    def test_interior_rows_shift_by_one(self, grid64):
        for n, n_next, amp in ladder_action_table(grid64):
            if n < grid64.size // 2 - 1:
                assert n_next == n + 1
            assert abs(abs(amp) - 1.0) <= 1e-12


class TestDualBasis:
    def test_orthonormal(self, grid64):
        states = dual_basis(grid64)
        stack = np.array([s.amplitudes for s in states])
        gram = stack.conj() @ stack.T
        assert np.abs(gram - np.eye(grid64.size)).max() <= 1e-12

    def test_ladder_eigenvalue_equation(self, grid64):
        y = np.diag(np.exp(1j * grid64.phi_points))
        for k, state in enumerate(dual_basis(grid64)):
            lhs = y @ state.amplitudes
            rhs = np.exp(1j * grid64.phi_points[k]) * state.amplitudes
            assert np.abs(lhs - rhs).max() <= 1e-12

    def test_zero_angle_state_has_unit_eigenvalue(self, grid64):
        k0 = grid64.size // 2
        assert grid64.phi_points[k0] == pytest.approx(0.0)
        y = np.diag(np.exp(1j * grid64.phi_points))
        state = dual_basis(grid64)[k0].amplitudes
        assert np.abs(y @ state - state).max() <= 1e-12

    def test_flat_charge_overlaps(self, grid64):
        states = dual_basis(grid64)
        expect = 1.0 / np.sqrt(grid64.size)
        for k in (0, 5, grid64.size // 2):
            charge_amps = grid64.to_charge(states[k].amplitudes)
            assert np.abs(np.abs(charge_amps) - expect).max() <= 1e-12

    def test_charge_state_round_trip(self, grid64):
        # dual states resolve the identity on charge eigenstates
        psi = charge_state(grid64, 3).amplitudes
        states = dual_basis(grid64)
        rebuilt = sum(np.vdot(s.amplitudes, psi) * s.amplitudes for s in states)
        assert np.abs(rebuilt - psi).max() <= 1e-12
