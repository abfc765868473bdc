"""Numerical laboratory for flux-deformed Josephson-junction dynamics.

A periodic phase grid realizes the charge/phase conjugate pair exactly as
a discrete Fourier pair; on top of it the package builds the deformed rate
operators, the junction and ring Hamiltonians, classical washboard
dynamics with the diffraction-modulated switching current, and split-step
quantum propagation, all behind a scenario service with a CLI client.
"""

__version__ = "0.1.0"

from .classical import SweepResult, SwitchingResult, Trajectory, WashboardState, fraunhofer_scan, switching_current
from .deform import Deformation, sinc
from .errors import ConfigurationError, IntegrationError
from .grids import (
    OperatorMatrix,
    PhaseGrid,
    StateVector,
    charge_state,
    commutator,
    gaussian_wavepacket,
    interior_projector,
    interior_residual,
    make_grid,
    number_operator,
    phase_function_operator,
)
from .junction import FluxMap, JJParams, build_deformed_hamiltonian, build_hamiltonian, critical_current, ej_prime, flux_to_s
from .qplane import QPlaneReport, dual_basis, ladder_action_table, verify_qplane
from .quantum import EvolutionTrace, ehrenfest_compare, propagate, verify_inner_heisenberg
from .rates import closed_form_rate_n, closed_form_rate_phi, conjugation_form, generalized_rate, naive_q_rate, standard_rate
from .ring import RingParams, SpectrumResult, build_ring_hamiltonian, ring_rate_phi, spectrum

__all__ = [
    "__version__",
    "ConfigurationError",
    "IntegrationError",
    "Deformation",
    "sinc",
    "PhaseGrid",
    "OperatorMatrix",
    "StateVector",
    "make_grid",
    "number_operator",
    "phase_function_operator",
    "commutator",
    "interior_projector",
    "interior_residual",
    "gaussian_wavepacket",
    "charge_state",
    "JJParams",
    "FluxMap",
    "build_hamiltonian",
    "build_deformed_hamiltonian",
    "ej_prime",
    "critical_current",
    "flux_to_s",
    "standard_rate",
    "generalized_rate",
    "conjugation_form",
    "naive_q_rate",
    "closed_form_rate_phi",
    "closed_form_rate_n",
    "QPlaneReport",
    "verify_qplane",
    "ladder_action_table",
    "dual_basis",
    "WashboardState",
    "Trajectory",
    "SwitchingResult",
    "SweepResult",
    "switching_current",
    "fraunhofer_scan",
    "EvolutionTrace",
    "propagate",
    "verify_inner_heisenberg",
    "ehrenfest_compare",
    "RingParams",
    "SpectrumResult",
    "build_ring_hamiltonian",
    "ring_rate_phi",
    "spectrum",
]
