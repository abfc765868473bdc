"""Classical washboard dynamics and the flux-modulated switching current.

The undeformed phase obeys ``(hbar C/2e) phidot' + I_J sin(phi) = I``; the
deformed equation keeps the same washboard form with the supercurrent term
replaced by ``I_J sinc(s/2) sin(phi - s/2)``, the minimal dynamic
completion of the deformed static balance.  Dynamics are dissipationless
(no shunt resistor, no noise), so escape from a minimum is a sharp
deterministic threshold located at ``|sinc(s/2)|`` in units of I_J, and a
bisection to 1e-3 resolves the full diffraction pattern.

Integration is fixed-step RK4 (default dt = 1e-3 in units hbar/EJ);
adaptive stepping is deliberately avoided so that repeated runs produce
byte-identical tables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .deform import Deformation, sinc
from .errors import ConfigurationError, IntegrationError
from .junction import JJParams, static_phase

#: winding beyond which a trajectory counts as running (two full wells)
RUNNING_WINDING = 4.0 * math.pi
#: relative-error floor used when the formula value approaches a pattern zero
REL_ERROR_FLOOR = 0.05


@dataclass(frozen=True)
class WashboardState:
    """Unbounded winding phase, its velocity, and the current time."""

    phi: float
    phidot: float
    t: float = 0.0


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    phi: np.ndarray
    phidot: np.ndarray

    @property
    def final_state(self) -> WashboardState:
        return WashboardState(float(self.phi[-1]), float(self.phidot[-1]), float(self.times[-1]))

    @property
    def winding(self) -> float:
        return float(self.phi[-1] - self.phi[0])


@dataclass(frozen=True)
class SwitchingResult:
    """Bisection estimate of the escape threshold, in units of I_J."""

    current: float
    bracketed: bool


@dataclass(frozen=True)
class SweepResult:
    s: float
    i_switch: float
    formula_value: float
    rel_error: float


def potential(phi, p: JJParams):
    """Washboard potential ``-(2/hbar e)(I_J cos(phi) + I phi)``.

    The overall factor (4 in the 2e = hbar = 1 convention) is irrelevant to
    the dynamics; stationarity reproduces ``I = I_J sin(phi)``.
    """
    phi = np.asarray(phi, dtype=float)
    i_phys = p.Ibias * p.critical_current
    return -4.0 * (p.critical_current * np.cos(phi) + i_phys * phi)


def deformed_rhs(state: WashboardState, p: JJParams, d: Deformation) -> float:
    """Phase acceleration ``(2e/hbar C)(I - I_J sinc(s/2) sin(phi - s/2))``."""
    amp = sinc(0.5 * d.s)
    return 2.0 * p.EC * p.EJ * (p.Ibias - amp * math.sin(state.phi - 0.5 * d.s))


def pendulum_energy(traj: Trajectory, p: JJParams) -> np.ndarray:
    """Conserved energy ``(hbar C/2e) phidot^2/2 - I_J cos(phi)`` at I = 0, s = 0."""
    return traj.phidot**2 / (4.0 * p.EC) - p.critical_current * np.cos(traj.phi)


@njit(cache=True)
def _rk4_path(phi0, v0, accel, ib, amp, shift, dt, n_steps, stride, out_phi, out_v):
    """Fixed-step RK4 on phidot' = accel*(ib - amp*sin(phi - shift)); returns steps completed."""
    phi = phi0
    v = v0
    out_phi[0] = phi
    out_v[0] = v
    idx = 1
    for step in range(n_steps):
        k1v = accel * (ib - amp * math.sin(phi - shift))
        k1x = v
        k2v = accel * (ib - amp * math.sin(phi + 0.5 * dt * k1x - shift))
        k2x = v + 0.5 * dt * k1v
        k3v = accel * (ib - amp * math.sin(phi + 0.5 * dt * k2x - shift))
        k3x = v + 0.5 * dt * k2v
        k4v = accel * (ib - amp * math.sin(phi + dt * k3x - shift))
        k4x = v + dt * k3v
        phi = phi + dt * (k1x + 2.0 * k2x + 2.0 * k3x + k4x) / 6.0
        v = v + dt * (k1v + 2.0 * k2v + 2.0 * k3v + k4v) / 6.0
        if not (math.isfinite(phi) and math.isfinite(v)):
            return step
        if (step + 1) % stride == 0:
            out_phi[idx] = phi
            out_v[idx] = v
            idx += 1
    return n_steps


@njit(cache=True)
def _escapes(phi0, accel, ib, amp, shift, dt, n_transient, n_total):
    """True when the winding past the transient exceeds the running threshold."""
    phi = phi0
    v = 0.0
    phi_ref = phi0
    for step in range(n_total):
        k1v = accel * (ib - amp * math.sin(phi - shift))
        k1x = v
        k2v = accel * (ib - amp * math.sin(phi + 0.5 * dt * k1x - shift))
        k2x = v + 0.5 * dt * k1v
        k3v = accel * (ib - amp * math.sin(phi + 0.5 * dt * k2x - shift))
        k3x = v + 0.5 * dt * k2v
        k4v = accel * (ib - amp * math.sin(phi + dt * k3x - shift))
        k4x = v + dt * k3v
        phi = phi + dt * (k1x + 2.0 * k2x + 2.0 * k3x + k4x) / 6.0
        v = v + dt * (k1v + 2.0 * k2v + 2.0 * k3v + k4v) / 6.0
        if step == n_transient - 1:
            phi_ref = phi
        elif step >= n_transient and abs(phi - phi_ref) > RUNNING_WINDING:
            return True
    return False


def integrate(
    state0: WashboardState,
    p: JJParams,
    d: Deformation,
    t_final: float,
    dt: float = 1e-3,
    sample_every: int = 1,
) -> Trajectory:
    """Fixed-step RK4 trajectory of the (deformed) washboard equation.

    Samples every ``sample_every`` steps, always including the initial
    state.  Aborts with the last valid time on non-finite values.
    """
    if dt <= 0.0:
        raise ConfigurationError(f"time step must be positive, got {dt}")
    if t_final < 10.0 * dt:
        raise ConfigurationError(f"duration {t_final} is shorter than 10 steps of {dt}")
    if sample_every < 1:
        raise ConfigurationError(f"sample_every must be >= 1, got {sample_every}")

    n_steps = int(round(t_final / dt))
    n_samples = n_steps // sample_every + 1
    out_phi = np.empty(n_samples)
    out_v = np.empty(n_samples)
    accel = 2.0 * p.EC * p.EJ
    amp = sinc(0.5 * d.s)
    completed = _rk4_path(
        state0.phi, state0.phidot, accel, p.Ibias, amp, 0.5 * d.s, dt, n_steps, sample_every, out_phi, out_v
    )
    if completed < n_steps:
        raise IntegrationError(
            f"trajectory left the finite domain at t = {state0.t + (completed + 1) * dt:.6f}"
            f" (last valid t = {state0.t + completed * dt:.6f})"
        )
    times = state0.t + dt * sample_every * np.arange(n_samples)
    return Trajectory(times=times, phi=out_phi, phidot=out_v)


def rest_state(p: JJParams, d: Deformation, ibias: float | None = None) -> WashboardState:
    """Rest at the washboard minimum, or at phi = s/2 when no minimum exists."""
    phi_min = static_phase(p, d, ibias=ibias)
    if phi_min is None:
        phi_min = 0.5 * d.s
    return WashboardState(phi=phi_min, phidot=0.0, t=0.0)


def _escape_at(i: float, p: JJParams, d: Deformation, dt: float, t_max: float) -> bool:
    accel = 2.0 * p.EC * p.EJ
    amp = sinc(0.5 * d.s)
    n_total = int(round(t_max / dt))
    n_transient = n_total // 10
    phi0 = rest_state(p, d, ibias=i).phi
    return bool(_escapes(phi0, accel, i, amp, 0.5 * d.s, dt, n_transient, n_total))


def switching_current(
    p: JJParams,
    d: Deformation,
    tol: float = 1e-3,
    t_max: float = 200.0,
    dt: float = 1e-3,
    i_max: float = 1.1,
    samples: list[tuple[float, bool]] | None = None,
) -> SwitchingResult:
    """Bisect for the smallest bias that sends the phase running.

    Each trial starts at rest at the local minimum (or phi = s/2 when the
    tilt has removed it) and runs for ``t_max``; running means winding
    beyond ``RUNNING_WINDING`` after a transient of a tenth of the run.
    ``I = 0`` is an exact equilibrium and anchors the bound side.  If even
    ``i_max`` fails to escape the search is unbracketed and 0 is returned
    with the flag cleared.  ``samples`` optionally records every (I,
    escaped) trial for monotonicity audits.
    """
    if tol <= 0.0:
        raise ConfigurationError(f"bisection tolerance must be positive, got {tol}")
    lo = 0.0
    hi = i_max
    if not _escape_at(hi, p, d, dt, t_max):
        if samples is not None:
            samples.append((hi, False))
        return SwitchingResult(current=0.0, bracketed=False)
    if samples is not None:
        samples.append((hi, True))
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        escaped = _escape_at(mid, p, d, dt, t_max)
        if samples is not None:
            samples.append((mid, escaped))
        if escaped:
            hi = mid
        else:
            lo = mid
    return SwitchingResult(current=0.5 * (lo + hi), bracketed=True)


def fraunhofer_scan(
    p: JJParams,
    s_values,
    tol: float = 1e-3,
    t_max: float = 200.0,
    dt: float = 1e-3,
) -> list[SweepResult]:
    """Switching current across a deformation sweep, against ``|sinc(s/2)|``.

    Results are produced in the order of ``s_values``; each point is an
    independent deterministic bisection.
    """
    results = []
    for s in s_values:
        d = Deformation(float(s))
        switch = switching_current(p, d, tol=tol, t_max=t_max, dt=dt)
        formula = abs(sinc(0.5 * d.s))
        rel = abs(switch.current - formula) / max(formula, REL_ERROR_FLOOR)
        results.append(SweepResult(s=float(s), i_switch=switch.current, formula_value=formula, rel_error=rel))
    return results
