"""Periodic phase grid realizing the conjugate charge/phase pair.

The Hilbert space is spanned by M grid points ``phi_k = 2*pi*k/M - pi``
covering ``[-pi, pi)``.  Its exact discrete Fourier dual carries the charge
labels ``n in {-M/2, ..., M/2 - 1}``.  With this pairing ``exp(i*phi_hat)``
is an exactly unitary cyclic ladder on the charge states, and the phase
operator is the real diagonal ``diag(phi_k)`` with a branch cut at ``+-pi``.

Conventions used throughout the package:

* every ``OperatorMatrix`` is expressed in the grid (phi) representation;
* every ``StateVector`` holds grid-representation amplitudes;
* the charge representation is reached with ``PhaseGrid.to_charge`` /
  ``to_charge_matrix``;
* hbar = 1 and 2e = 1, so charge is counted in Cooper pairs.

The wrap transition ``n = M/2 - 1 -> -M/2`` and the branch cut at ``+-pi``
are the two finite-size artifacts of the representation.  They are
quantified (see ``interior_projector`` and the q-plane report), never
silently hidden.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Literal

import numpy as np

from .errors import ConfigurationError

#: validation tolerance for role claims and state norms (scaled by the
#: largest entry for matrices whose natural scale exceeds unity)
ROLE_TOL = 1e-12
NORM_TOL = 1e-12

MIN_GRID = 4
MAX_GRID = 4096

Role = Literal["hermitian", "unitary", "general"]


def _frozen_complex(values, ndim: int) -> np.ndarray:
    arr = np.array(values, dtype=complex)
    if arr.ndim != ndim:
        raise ConfigurationError(f"expected a {ndim}-dimensional complex array, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class OperatorMatrix:
    """Dense complex square matrix tagged with the structure it claims.

    The role tag is validated at construction: ``hermitian`` requires
    ``max|A - A^dag|`` and ``unitary`` requires ``max|A^dag A - 1|`` to stay
    below ``ROLE_TOL`` (relative to the largest entry when that exceeds 1).
    """

    entries: np.ndarray
    role: Role = "general"

    def __post_init__(self) -> None:
        entries = _frozen_complex(self.entries, 2)
        if entries.shape[0] != entries.shape[1]:
            raise ConfigurationError(f"operator matrix must be square, got shape {entries.shape}")
        object.__setattr__(self, "entries", entries)
        if self.role == "hermitian":
            defect = float(np.abs(entries - entries.conj().T).max())
            scale = max(1.0, float(np.abs(entries).max()))
            if defect > ROLE_TOL * scale:
                raise ConfigurationError(f"hermitian role claimed but defect {defect:.3e} exceeds tolerance")
        elif self.role == "unitary":
            gram = entries.conj().T @ entries
            defect = float(np.abs(gram - np.eye(entries.shape[0])).max())
            if defect > ROLE_TOL * max(1.0, float(np.abs(entries).max())):
                raise ConfigurationError(f"unitary role claimed but defect {defect:.3e} exceeds tolerance")
        elif self.role != "general":
            raise ConfigurationError(f"unknown operator role {self.role!r}")

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def dagger(self) -> "OperatorMatrix":
        return OperatorMatrix(self.entries.conj().T, role=self.role)


@dataclass(frozen=True)
class StateVector:
    """Normalized amplitude vector in the grid representation."""

    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amplitudes = _frozen_complex(self.amplitudes, 1)
        object.__setattr__(self, "amplitudes", amplitudes)
        norm = float(np.linalg.norm(amplitudes))
        if abs(norm - 1.0) > NORM_TOL:
            raise ConfigurationError(f"state vector norm {norm!r} deviates from 1 beyond {NORM_TOL}")

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    @classmethod
    def normalized(cls, raw) -> "StateVector":
        raw = np.asarray(raw, dtype=complex)
        norm = np.linalg.norm(raw)
        if norm == 0.0 or not np.isfinite(norm):
            raise ConfigurationError("cannot normalize a zero or non-finite vector")
        return cls(raw / norm)


@dataclass(frozen=True)
class PhaseGrid:
    """Finite periodic phase grid and its integer charge dual."""

    size: int
    phi_points: np.ndarray
    charge_values: np.ndarray

    def __post_init__(self) -> None:
        phi = np.asarray(self.phi_points, dtype=float)
        phi.setflags(write=False)
        charges = np.asarray(self.charge_values, dtype=int)
        charges.setflags(write=False)
        object.__setattr__(self, "phi_points", phi)
        object.__setattr__(self, "charge_values", charges)

    @property
    def step(self) -> float:
        return 2.0 * np.pi / self.size

    @property
    def dft_matrix(self) -> np.ndarray:
        """Unitary DFT with rows labeled by charge, columns by grid point."""
        return _dft(self.size)

    def to_charge(self, amplitudes: np.ndarray) -> np.ndarray:
        return self.dft_matrix @ np.asarray(amplitudes, dtype=complex)

    def from_charge(self, amplitudes: np.ndarray) -> np.ndarray:
        return self.dft_matrix.conj().T @ np.asarray(amplitudes, dtype=complex)

    def charge_index(self, n: int) -> int:
        """Row index of charge ``n`` in the charge representation."""
        if not -self.size // 2 <= n <= self.size // 2 - 1:
            raise ConfigurationError(f"charge {n} outside window [{-self.size // 2}, {self.size // 2 - 1}]")
        return int(n + self.size // 2)


@lru_cache(maxsize=16)
def _dft(m: int) -> np.ndarray:
    charges = np.arange(m) - m // 2
    phi = 2.0 * np.pi * np.arange(m) / m - np.pi
    f = np.exp(-1j * np.outer(charges, phi)) / np.sqrt(m)
    f.setflags(write=False)
    return f


def make_grid(m: int) -> PhaseGrid:
    """Build the phase grid for an even size ``m`` in ``[4, 4096]``."""
    if not isinstance(m, (int, np.integer)):
        raise ConfigurationError(f"grid size must be an integer, got {m!r}")
    m = int(m)
    if m % 2 != 0:
        raise ConfigurationError(f"grid size must be even, got {m}")
    if not MIN_GRID <= m <= MAX_GRID:
        raise ConfigurationError(f"grid size must lie in [{MIN_GRID}, {MAX_GRID}], got {m}")
    phi = 2.0 * np.pi * np.arange(m) / m - np.pi
    charges = np.arange(m) - m // 2
    return PhaseGrid(size=m, phi_points=phi, charge_values=charges)


def number_operator(grid: PhaseGrid) -> OperatorMatrix:
    """Charge operator ``n_hat`` in the grid representation.

    Built as ``F^dag diag(n) F`` so its spectrum is exactly the integer
    charge window; it is the spectral realization of ``-i d/dphi`` on the
    periodic grid.
    """
    f = grid.dft_matrix
    entries = f.conj().T @ (grid.charge_values[:, None] * f)
    return OperatorMatrix(entries, role="hermitian")


def phase_function_operator(grid: PhaseGrid, f: str, scale: float = 1.0) -> OperatorMatrix:
    """Diagonal multiplication operator for a function of the phase angle.

    Parameters
    ----------
    f:
        one of ``"cos"``, ``"sin"``, ``"exp"`` (meaning ``exp(i*scale*phi)``)
        or ``"angle"`` (the phase itself on the branch ``[-pi, pi)``).
    scale:
        real frequency used by the ``"exp"`` form; ignored otherwise.
    """
    phi = grid.phi_points
    if f == "cos":
        return OperatorMatrix(np.diag(np.cos(phi)).astype(complex), role="hermitian")
    if f == "sin":
        return OperatorMatrix(np.diag(np.sin(phi)).astype(complex), role="hermitian")
    if f == "angle":
        return OperatorMatrix(np.diag(phi).astype(complex), role="hermitian")
    if f == "exp":
        return OperatorMatrix(np.diag(np.exp(1j * float(scale) * phi)), role="unitary")
    raise ConfigurationError(f"unknown phase function {f!r}; expected cos, sin, exp or angle")


def commutator(a: OperatorMatrix, b: OperatorMatrix) -> OperatorMatrix:
    """``AB - BA`` for equal-dimension operators."""
    if a.dim != b.dim:
        raise ConfigurationError(f"commutator of mismatched dimensions {a.dim} and {b.dim}")
    return OperatorMatrix(a.entries @ b.entries - b.entries @ a.entries, role="general")


def interior_projector(grid: PhaseGrid, k: int) -> OperatorMatrix:
    """Orthogonal projector onto charge states with ``|n| <= k``.

    Isolates the interior of the charge window from the wrap transition at
    its edge; residual checks of ladder identities are meaningful only on
    this block.
    """
    if not 0 < k < grid.size // 2:
        raise ConfigurationError(f"interior half-width must satisfy 0 < K < M/2, got K={k}, M={grid.size}")
    mask = (np.abs(grid.charge_values) <= k).astype(complex)
    f = grid.dft_matrix
    entries = f.conj().T @ (mask[:, None] * f)
    return OperatorMatrix(entries, role="hermitian")


def to_charge_matrix(grid: PhaseGrid, entries: np.ndarray) -> np.ndarray:
    """Re-express a grid-representation matrix in the charge basis."""
    f = grid.dft_matrix
    return f @ np.asarray(entries, dtype=complex) @ f.conj().T


def interior_block(grid: PhaseGrid, entries: np.ndarray, k: int) -> np.ndarray:
    """Charge-basis block of a grid-representation matrix with ``|n|, |n'| <= k``."""
    if not 0 < k < grid.size // 2:
        raise ConfigurationError(f"interior half-width must satisfy 0 < K < M/2, got K={k}, M={grid.size}")
    rep = to_charge_matrix(grid, entries)
    mask = np.abs(grid.charge_values) <= k
    return rep[np.ix_(mask, mask)]


def interior_residual(grid: PhaseGrid, a: OperatorMatrix, b: OperatorMatrix, k: int) -> float:
    """Max-entry difference of two operators on the interior charge block."""
    if a.dim != b.dim:
        raise ConfigurationError(f"residual of mismatched dimensions {a.dim} and {b.dim}")
    return float(np.abs(interior_block(grid, a.entries - b.entries, k)).max())


def max_entry_diff(a: OperatorMatrix, b: OperatorMatrix) -> float:
    """Max absolute entrywise difference, the comparison norm used throughout."""
    if a.dim != b.dim:
        raise ConfigurationError(f"difference of mismatched dimensions {a.dim} and {b.dim}")
    return float(np.abs(a.entries - b.entries).max())


def charge_state(grid: PhaseGrid, n: int) -> StateVector:
    """Charge eigenstate ``|n>`` as a grid-representation plane wave."""
    grid.charge_index(n)
    return StateVector(np.exp(1j * n * grid.phi_points) / np.sqrt(grid.size))


def expectation(op: OperatorMatrix, psi: StateVector) -> complex:
    return complex(np.vdot(psi.amplitudes, op.entries @ psi.amplitudes))


#: fraction of probability tolerated on the representation edges
EDGE_MASS_TOL = 1e-8


def gaussian_wavepacket(grid: PhaseGrid, phi0: float, n0: float, width: float) -> StateVector:
    """Normalized Gaussian packet centered at phase ``phi0`` with mean charge ``n0``.

    The packet must stay clear of both representation edges: ``phi0`` at
    least ``3*width`` from the branch cut at ``+-pi``, and total probability
    within one grid/charge step of either edge below ``EDGE_MASS_TOL``.
    """
    if width <= 0.0:
        raise ConfigurationError(f"packet width must be positive, got {width}")
    m = grid.size
    phi0 = float(phi0)
    # distance to the cut measured on the circle
    wrapped = np.mod(phi0 + np.pi, 2.0 * np.pi) - np.pi
    cut_distance = np.pi - abs(wrapped)
    if cut_distance < 3.0 * width:
        raise ConfigurationError(
            f"packet center {phi0:.4f} is {cut_distance:.4f} rad from the branch cut; need >= {3.0 * width:.4f}"
        )
    phi = grid.phi_points
    raw = np.exp(-((phi - wrapped) ** 2) / (4.0 * width**2) + 1j * n0 * phi)
    psi = raw / np.linalg.norm(raw)

    cut_mass = float(abs(psi[0]) ** 2 + abs(psi[-1]) ** 2)
    c = grid.to_charge(psi)
    edge_mass = float(abs(c[0]) ** 2 + abs(c[1]) ** 2 + abs(c[-1]) ** 2 + abs(c[-2]) ** 2)
    if cut_mass > EDGE_MASS_TOL:
        raise ConfigurationError(f"packet mass {cut_mass:.3e} at the branch cut exceeds {EDGE_MASS_TOL}")
    if edge_mass > EDGE_MASS_TOL:
        raise ConfigurationError(f"packet mass {edge_mass:.3e} at the charge-window edge exceeds {EDGE_MASS_TOL}")
    return StateVector(psi)


def matrix_csv(entries: np.ndarray) -> str:
    """Row-major CSV dump of a complex matrix, entries as ``re+imj`` pairs."""
    entries = np.asarray(entries, dtype=complex)
    lines = []
    for row in entries:
        lines.append(",".join(_fmt_complex(z) for z in row))
    return "\n".join(lines) + "\n"


def _fmt_complex(z: complex) -> str:
    sign = "+" if z.imag >= 0 else "-"
    return f"{float(z.real)!r}{sign}{abs(float(z.imag))!r}j"
