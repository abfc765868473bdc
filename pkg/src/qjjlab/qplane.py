"""Exchange relation between the charge exponential and the phase ladder.

With X = q^{n_hat} (charge-diagonal) and Y = exp(i*phi_hat) (the unit
charge ladder), the infinite-ladder algebra obeys X Y = q Y X.  On the
finite window the relation is exact except on the single wrap transition
``n = M/2 - 1 -> -M/2``, where the two sides differ by the closed-form
factor ``exp(-i s M) - 1``; commensurate deformations ``s M = 2 pi j``
cancel the wrap phase and restore the exact relation.  This module
measures those statements rather than assuming them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .deform import Deformation
from .errors import ConfigurationError
from .grids import PhaseGrid, StateVector, to_charge_matrix

#: tolerance below which s*M is treated as a multiple of 2*pi
COMMENSURATE_TOL = 1e-12


@dataclass(frozen=True)
class QPlaneReport:
    """Measured residuals of the exchange relation on one grid.

    ``residual_full`` is the max-entry residual of ``X Y - q Y X`` in the
    charge basis, ``residual_interior`` the same after projecting onto
    ``|n| <= K``.  ``offwrap_residual`` is the residual with the single wrap
    entry removed, certifying that the deviation is wrap-supported;
    ``wrap_residual`` is the magnitude on the wrap entry itself, to be
    compared with ``|exp(-i s M) - 1|``.
    """

    s: float
    grid_size: int
    residual_full: float
    residual_interior: float
    commensurate: bool
    wrap_residual: float
    offwrap_residual: float

    @property
    def wrap_expected(self) -> float:
        return float(abs(np.exp(-1j * self.s * self.grid_size) - 1.0))


def verify_qplane(grid: PhaseGrid, d: Deformation, k: int | None = None) -> QPlaneReport:
    """Measure the exchange-relation residuals for one deformation.

    ``k`` is the interior half-width (default M/4).
    """
    m = grid.size
    if k is None:
        k = m // 4
    if not 0 < k < m // 2:
        raise ConfigurationError(f"interior half-width must satisfy 0 < K < M/2, got K={k}, M={m}")

    # in the charge basis X is exactly diagonal, so both products are exact
    # row/column scalings of the ladder matrix and s = 0 cancels identically
    x_diag = np.exp(1j * d.s * grid.charge_values)
    y = to_charge_matrix(grid, np.diag(np.exp(1j * grid.phi_points)))
    deviation = x_diag[:, None] * y - d.q * (y * x_diag[None, :])

    residual_full = float(np.abs(deviation).max())
    mask = np.abs(grid.charge_values) <= k
    residual_interior = float(np.abs(deviation[np.ix_(mask, mask)]).max())

    wrap_row = grid.charge_index(-m // 2)
    wrap_col = grid.charge_index(m // 2 - 1)
    wrap_residual = float(abs(deviation[wrap_row, wrap_col]))
    off = deviation.copy()
    off[wrap_row, wrap_col] = 0.0
    offwrap_residual = float(np.abs(off).max())

    rem = d.s * m - 2.0 * np.pi * round(d.s * m / (2.0 * np.pi))
    commensurate = abs(rem) <= COMMENSURATE_TOL

    return QPlaneReport(
        s=d.s,
        grid_size=m,
        residual_full=residual_full,
        residual_interior=residual_interior,
        commensurate=commensurate,
        wrap_residual=wrap_residual,
        offwrap_residual=offwrap_residual,
    )


def ladder_action_table(grid: PhaseGrid, direction: int = +1) -> list[tuple[int, int, complex]]:
    """Action of exp(+-i*phi_hat) on each charge state: rows (n, n', amplitude).

    For every charge state there is a unique image with unit-modulus
    amplitude; interior states map to ``n + direction`` and the window edge
    wraps around, which is reported rather than suppressed.
    """
    if direction not in (+1, -1):
        raise ConfigurationError(f"ladder direction must be +1 or -1, got {direction}")
    y = np.diag(np.exp(1j * direction * grid.phi_points))
    rep = to_charge_matrix(grid, y)
    table: list[tuple[int, int, complex]] = []
    for col, n in enumerate(grid.charge_values):
        row = int(np.argmax(np.abs(rep[:, col])))
        table.append((int(n), int(grid.charge_values[row]), complex(rep[row, col])))
    return table


def dual_basis(grid: PhaseGrid) -> list[StateVector]:
    """Phase-localized states |phi_k> built from their charge expansion.

    Each state has charge amplitudes ``exp(-i n phi_k)/sqrt(M)`` and is an
    exact eigenvector of exp(i*phi_hat) with eigenvalue ``exp(i phi_k)``;
    in the grid representation they come out as the grid deltas.
    """
    states = []
    for phi_k in grid.phi_points:
        charge_amps = np.exp(-1j * grid.charge_values * phi_k) / np.sqrt(grid.size)
        states.append(StateVector(grid.from_charge(charge_amps)))
    return states
