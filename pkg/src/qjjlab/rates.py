"""Rate operators: the Heisenberg form and its unitary-deformed extension.

The deformed rate of an observable A is

    D_t A = q^{-A} [q^A, H] / (i*hbar*ln q),     q = exp(is),

which reduces to the Heisenberg rate [A, H]/(i*hbar) as s -> 0.  For
hermitian A with real s the operator q^A = exp(isA) is unitary and the
algebraically equivalent conjugation form

    D_t A = (exp(-isA) H exp(isA) - H) / (hbar*s)

shows that D_t A is hermitian and that H itself is always conserved
(D_t H = 0), unlike under the naive commutator deformation AH - qHA.

For the junction the two channels behave differently on the finite grid:
the charge channel has its closed form exactly on the interior charge
block (deviations confined to the window wrap), while the phase channel
reaches its closed form on the interior block only for integer s, where
exp(is*phi) is continuous across the branch cut.  For non-integer s the
cut acts as a full-strength boundary term; the closed form then holds at
cut-avoiding wavepacket level instead.  Both artifacts are reported by the
residual helpers rather than hidden.
"""

from __future__ import annotations

import numpy as np

from .deform import Deformation, sinc
from .errors import ConfigurationError
from .grids import OperatorMatrix, PhaseGrid, number_operator
from .junction import JJParams, drive_charge

HBAR = 1.0


def _check_dims(a: OperatorMatrix, b: OperatorMatrix) -> None:
    if a.dim != b.dim:
        raise ConfigurationError(f"operator dimensions {a.dim} and {b.dim} do not match")


def _check_hermitian(op: OperatorMatrix, name: str) -> None:
    entries = op.entries
    defect = float(np.abs(entries - entries.conj().T).max())
    scale = max(1.0, float(np.abs(entries).max()))
    if defect > 1e-12 * scale:
        raise ConfigurationError(f"{name} must be hermitian; defect {defect:.3e}")


def unitary_phase_exp(a: OperatorMatrix, s: float) -> np.ndarray:
    """exp(i*s*A) for hermitian A, exactly unitary up to roundoff.

    Diagonal matrices are exponentiated entrywise; otherwise a hermitian
    eigendecomposition is used (no series truncation).
    """
    entries = a.entries
    diag = np.diagonal(entries)
    if np.count_nonzero(entries - np.diag(diag)) == 0:
        return np.diag(np.exp(1j * s * diag.real))
    w, v = np.linalg.eigh(entries)
    return (v * np.exp(1j * s * w)) @ v.conj().T


def standard_rate(a: OperatorMatrix, h: OperatorMatrix) -> OperatorMatrix:
    """Heisenberg rate [A, H] / (i*hbar)."""
    _check_dims(a, h)
    _check_hermitian(h, "H")
    entries = (a.entries @ h.entries - h.entries @ a.entries) / (1j * HBAR)
    role = "general"
    if float(np.abs(a.entries - a.entries.conj().T).max()) <= 1e-12 * max(1.0, float(np.abs(a.entries).max())):
        role = "hermitian"
        entries = 0.5 * (entries + entries.conj().T)
    return OperatorMatrix(entries, role=role)


def generalized_rate(a: OperatorMatrix, h: OperatorMatrix, d: Deformation) -> OperatorMatrix:
    """Deformed rate q^{-A} [q^A, H] / (i*hbar*ln q) with q = exp(is).

    Falls back to the standard rate at s = 0, where 1/ln q is singular but
    the limit is the Heisenberg rate.  Requires hermitian A so that q^A is
    unitary.
    """
    _check_dims(a, h)
    if d.s == 0.0:
        return standard_rate(a, h)
    _check_hermitian(a, "A")
    _check_hermitian(h, "H")
    u = unitary_phase_exp(a, d.s)
    ln_q = 1j * d.s
    entries = u.conj().T @ (u @ h.entries - h.entries @ u) / (1j * HBAR * ln_q)
    # hermitian in exact arithmetic; symmetrization only absorbs matmul
    # roundoff, and a defect beyond that scale is a structural error
    defect = float(np.abs(entries - entries.conj().T).max())
    if defect > 1e-10 * max(1.0, float(np.abs(h.entries).max())):
        raise ConfigurationError(f"deformed rate lost hermiticity (defect {defect:.3e}); inputs are inconsistent")
    return OperatorMatrix(0.5 * (entries + entries.conj().T), role="hermitian")


def conjugation_form(a: OperatorMatrix, h: OperatorMatrix, d: Deformation) -> OperatorMatrix:
    """Equivalent rearrangement (exp(-isA) H exp(isA) - H) / (hbar*s).

    Manifestly hermitian; agrees with ``generalized_rate`` to roundoff for
    every s != 0.  At s = 0 there is nothing to conjugate: use
    ``standard_rate``.
    """
    _check_dims(a, h)
    if d.s == 0.0:
        raise ConfigurationError("conjugation form is undefined at s = 0; use standard_rate")
    _check_hermitian(a, "A")
    _check_hermitian(h, "H")
    u = unitary_phase_exp(a, d.s)
    sandwich = u.conj().T @ h.entries @ u
    sandwich = 0.5 * (sandwich + sandwich.conj().T)
    return OperatorMatrix((sandwich - h.entries) / (HBAR * d.s), role="hermitian")


def naive_q_rate(a: OperatorMatrix, h: OperatorMatrix, d: Deformation) -> OperatorMatrix:
    """Rejected deformation (AH - qHA)/(i*hbar): does not conserve H.

    Kept as a demonstration: for A = H the output is (1-q) H^2/(i*hbar),
    nonzero whenever q != 1.
    """
    _check_dims(a, h)
    entries = (a.entries @ h.entries - d.q * h.entries @ a.entries) / (1j * HBAR)
    return OperatorMatrix(entries, role="general")


def closed_form_rate_phi(grid: PhaseGrid, p: JJParams, d: Deformation, t: float = 0.0) -> OperatorMatrix:
    """Closed form of the deformed phase rate: (2e/hbar C)(2e n + It + es).

    In the 2e = hbar = 1 convention this is ``2*EC*(n_hat + I*t + s/2)``,
    diagonal in the charge basis plus a scalar: the deformation adds a
    constant charge offset s/2 to the phase velocity.
    """
    n_op = number_operator(grid).entries
    offset = drive_charge(p, t) + 0.5 * d.s
    entries = 2.0 * p.EC * (n_op + offset * np.eye(grid.size))
    return OperatorMatrix(entries, role="hermitian")


def closed_form_rate_n(grid: PhaseGrid, p: JJParams, d: Deformation) -> OperatorMatrix:
    """Closed form of the deformed charge rate: -(I_J/2e) sinc(s/2) sin(phi - s/2).

    Grid-diagonal; the supercurrent keeps its sine form but with the phase
    shifted by s/2 and the amplitude modulated by sinc(s/2), which is the
    origin of the diffraction-like critical-current envelope.
    """
    amp = p.EJ * sinc(0.5 * d.s)
    entries = np.diag(-amp * np.sin(grid.phi_points - 0.5 * d.s)).astype(complex)
    return OperatorMatrix(entries, role="hermitian")
