"""Current-biased junction model: parameters, Hamiltonians, critical current.

Unit convention (fixed across the package): hbar = 1, 2e = 1, energies in
units of the Josephson coupling ``EJ`` (default 1), time in hbar/EJ.  With
these choices the junction critical current equals ``EJ`` and the bias
``Ibias`` is specified directly as a fraction of it.  The charging energy
is ``EC = 2e^2/C``, i.e. ``C = 1/(2*EC)`` here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .deform import Deformation, sinc
from .errors import ConfigurationError
from .grids import OperatorMatrix, PhaseGrid, number_operator

#: smallest EJ/EC ratio treated as semiclassical
CLASSICAL_RATIO = 20.0


@dataclass(frozen=True)
class JJParams:
    """Junction physics: coupling ``EJ``, charging energy ``EC``, bias ``Ibias``.

    ``Ibias`` is measured in units of the critical current ``I_J = EJ``
    (hbar = 2e = 1).  ``classical_ok`` gates semiclassical comparisons.
    """

    EJ: float = 1.0
    EC: float = 0.05
    Ibias: float = 0.0

    def __post_init__(self) -> None:
        # EJ = 0 is allowed: the junction degenerates to a free rotor
        if self.EJ < 0.0:
            raise ConfigurationError(f"EJ must be non-negative, got {self.EJ}")
        if self.EC <= 0.0:
            raise ConfigurationError(f"EC must be positive, got {self.EC}")

    @property
    def classical_ok(self) -> bool:
        return self.EJ / self.EC >= CLASSICAL_RATIO

    @property
    def critical_current(self) -> float:
        """I_J = 2e*EJ/hbar, equal to EJ in this convention."""
        return self.EJ

    @property
    def capacitance(self) -> float:
        """C = 2e^2/EC = 1/(2*EC) with 2e = 1."""
        return 1.0 / (2.0 * self.EC)

    @property
    def plasma_frequency(self) -> float:
        """Small-oscillation frequency about an untilted minimum, sqrt(2*EC*EJ)."""
        return math.sqrt(2.0 * self.EC * self.EJ)


def drive_charge(p: JJParams, t: float) -> float:
    """The c-number ``I*t`` accumulated by the bias drive (charge units, 2e = 1)."""
    return p.Ibias * p.EJ * t


def build_hamiltonian(grid: PhaseGrid, p: JJParams, t: float = 0.0) -> OperatorMatrix:
    """Junction Hamiltonian ``(2e n + I t)^2 / 2C - EJ cos(phi)`` at time ``t``.

    The bias enters only through the c-number drive ``I*t``; no gauge
    transformation is applied to remove it.
    """
    n_op = number_operator(grid).entries
    shifted = n_op + drive_charge(p, t) * np.eye(grid.size)
    entries = p.EC * (shifted @ shifted) - p.EJ * np.diag(np.cos(grid.phi_points))
    return OperatorMatrix(entries, role="hermitian")


def build_deformed_hamiltonian(grid: PhaseGrid, p: JJParams, d: Deformation, t: float = 0.0) -> OperatorMatrix:
    """Deformed Hamiltonian with charge and phase each shifted by ``s/2``.

    The charge shift is ``n -> n + s/2`` and the coupling rescales to
    ``ej_prime``; the shifted cosine is evaluated pointwise on the grid,
    which is exact.  Under the standard rate this Hamiltonian reproduces the
    deformed dynamics generated by the original one.
    """
    n_op = number_operator(grid).entries
    shifted = n_op + (0.5 * d.s + drive_charge(p, t)) * np.eye(grid.size)
    cosine = np.diag(np.cos(grid.phi_points - 0.5 * d.s))
    entries = p.EC * (shifted @ shifted) - ej_prime(p.EJ, d) * cosine
    return OperatorMatrix(entries, role="hermitian")


def ej_prime(ej: float, d: Deformation) -> float:
    """Deformation-rescaled coupling ``EJ * sin(s/2)/(s/2)``."""
    return ej * sinc(0.5 * d.s)


def critical_current(d: Deformation, phi: float) -> float:
    """Static supercurrent balance ``sinc(s/2) * sin(phi - s/2)`` in units of I_J.

    Its maximum over ``phi`` is ``|sinc(s/2)|``: the deformation both shifts
    the phase and modulates the maximal critical current with the
    diffraction-like envelope that vanishes at ``s = 2*pi*k``.
    """
    return sinc(0.5 * d.s) * math.sin(phi - 0.5 * d.s)


@dataclass(frozen=True)
class FluxMap:
    """Magnetic flux threading the junction, in units of the flux quantum.

    ``phi0`` is the Cooper-pair flux quantum (pi*hbar/e in physical units,
    1 in the dimensionless convention).
    """

    Phi: float
    phi0: float = 1.0

    def __post_init__(self) -> None:
        if self.phi0 <= 0.0:
            raise ConfigurationError(f"flux quantum must be positive, got {self.phi0}")


def flux_to_s(f: FluxMap) -> Deformation:
    """Deformation angle of a threaded flux: ``s = 2*pi*Phi/phi0``."""
    return Deformation(2.0 * math.pi * f.Phi / f.phi0)


def static_phase(p: JJParams, d: Deformation, ibias: float | None = None) -> float | None:
    """Phase of the stable static solution, or None when the tilt removes it.

    Solves ``Ibias = sinc(s/2) * sin(phi - s/2)`` on the branch where the
    washboard curvature is positive (this covers negative envelope values,
    whose minima sit half a period away).
    """
    amp = sinc(0.5 * d.s)
    i = p.Ibias if ibias is None else ibias
    if amp == 0.0 or abs(i) > abs(amp):
        return None
    ratio = i / amp
    if amp > 0.0:
        return 0.5 * d.s + math.asin(ratio)
    return 0.5 * d.s + math.pi - math.asin(ratio)


def ground_packet_width(p: JJParams) -> float:
    """Harmonic ground-state phase width at the (tilted) washboard minimum.

    The quadratic expansion about the minimum has frequency
    ``sqrt(2*EC*EJ*cos(phi_min))``; the corresponding ground Gaussian has
    ``<phi^2> = sqrt(EC / (2*EJ*cos(phi_min)))``.
    """
    if p.EJ == 0.0:
        raise ConfigurationError("no washboard minimum without a Josephson coupling")
    if abs(p.Ibias) >= 1.0:
        raise ConfigurationError(f"no static minimum at |Ibias| = {abs(p.Ibias)} >= 1")
    cos_min = math.sqrt(1.0 - p.Ibias**2)
    return (p.EC / (2.0 * p.EJ * cos_min)) ** 0.25
