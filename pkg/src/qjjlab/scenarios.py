"""Scenario runners: deterministic, self-checking computations behind the API.

Each runner takes a sparse request (unset fields fall back to documented
per-scenario defaults), computes its table, evaluates its tolerance checks
and renders a CSV whose commented header echoes every effective parameter.
Identical requests produce byte-identical CSV text: floats are formatted
with ``repr`` and all orderings are fixed.
"""

from __future__ import annotations

import math
from typing import Any, Callable

import numpy as np
from pydantic import AliasChoices, BaseModel, ConfigDict, Field

from . import classical, quantum
from .deform import Deformation, sinc
from .errors import ConfigurationError
from .grids import (
    OperatorMatrix,
    gaussian_wavepacket,
    interior_residual,
    make_grid,
    matrix_csv,
    max_entry_diff,
    number_operator,
    phase_function_operator,
)
from .junction import JJParams, build_deformed_hamiltonian, build_hamiltonian, ej_prime, ground_packet_width, static_phase
from .qplane import verify_qplane
from .rates import closed_form_rate_n, closed_form_rate_phi, conjugation_form, generalized_rate, standard_rate, unitary_phase_exp
from .ring import RingParams, spectrum


class ScenarioRequest(BaseModel):
    """Sparse run configuration; unset fields take scenario defaults.

    Config files may use the junction-parameter spellings ``Ibias`` and
    ``Phi`` for the bias current and the threaded flux.
    """

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    M: int | None = Field(default=None, ge=4, le=4096)
    K: int | None = Field(default=None, ge=1)
    s: float | None = None
    phi_flux: float | None = Field(default=None, validation_alias=AliasChoices("phi_flux", "Phi"))
    EJ: float | None = Field(default=None, ge=0)
    EC: float | None = Field(default=None, gt=0)
    I: float | None = Field(default=None, validation_alias=AliasChoices("I", "Ibias"))
    t: float | None = None
    dt: float | None = Field(default=None, gt=0)
    T: float | None = Field(default=None, gt=0)
    tol: float | None = Field(default=None, gt=0)
    s_min: float | None = None
    s_max: float | None = None
    s_step: float | None = Field(default=None, gt=0)
    t_values: list[float] | None = None
    i_values: list[float] | None = None
    k_levels: int | None = Field(default=None, ge=1)
    v0: float | None = Field(default=None, ge=0)
    inertia: float | None = Field(default=None, gt=0)
    phi0: float | None = None
    n0: float | None = None
    width: float | None = Field(default=None, gt=0)
    sample_every: int | None = Field(default=None, ge=1)
    dump_operators: bool = False


class CheckResult(BaseModel):
    name: str
    passed: bool
    value: float
    bound: float
    detail: str = ""


class ScenarioReport(BaseModel):
    scenario: str
    params: dict[str, Any]
    columns: list[str]
    rows: list[list[Any]]
    checks: list[CheckResult]
    passed: bool
    csv: str
    dumps: dict[str, str] | None = None


def _fmt(v: Any) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _render_csv(scenario: str, params: dict[str, Any], columns: list[str], rows: list[list[Any]]) -> str:
    lines = [f"# scenario={scenario}"]
    for key, value in params.items():
        lines.append(f"# {key}={_fmt(value)}")
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def _resolve_s(req: ScenarioRequest, default: float) -> float:
    if req.s is not None and req.phi_flux is not None:
        raise ConfigurationError("give either s or phi_flux, not both")
    if req.phi_flux is not None:
        return 2.0 * math.pi * req.phi_flux
    return req.s if req.s is not None else default


def _report(scenario, params, columns, rows, checks, dumps=None) -> ScenarioReport:
    return ScenarioReport(
        scenario=scenario,
        params=params,
        columns=columns,
        rows=rows,
        checks=checks,
        passed=all(c.passed for c in checks),
        csv=_render_csv(scenario, params, columns, rows),
        dumps=dumps,
    )


def _run_verify_identities(req: ScenarioRequest) -> ScenarioReport:
    m = req.M if req.M is not None else 256
    k = req.K if req.K is not None else m // 4
    s = _resolve_s(req, 1.0)
    p_base = JJParams(EJ=req.EJ if req.EJ is not None else 1.0, EC=req.EC if req.EC is not None else 0.05)
    t_values = req.t_values if req.t_values is not None else ([req.t] if req.t is not None else [0.0, 1.0])
    i_values = req.i_values if req.i_values is not None else ([req.I] if req.I is not None else [0.0, 0.3])
    tol = req.tol if req.tol is not None else 1e-10

    grid = make_grid(m)
    d = Deformation(s)
    n_op = number_operator(grid)
    phi_op = phase_function_operator(grid, "angle")

    params = {"M": m, "K": k, "s": s, "EJ": p_base.EJ, "EC": p_base.EC,
              "t_values": " ".join(_fmt(t) for t in t_values),
              "i_values": " ".join(_fmt(i) for i in i_values), "tol": tol}
    columns = ["M", "K", "s", "t", "I", "observable", "residual_max"]
    rows: list[list[Any]] = []
    checks: list[CheckResult] = []
    for t in t_values:
        for ib in i_values:
            p = JJParams(EJ=p_base.EJ, EC=p_base.EC, Ibias=ib)
            h = build_hamiltonian(grid, p, t)
            res_n = interior_residual(grid, generalized_rate(n_op, h, d), closed_form_rate_n(grid, p, d), k)
            res_phi = interior_residual(grid, generalized_rate(phi_op, h, d), closed_form_rate_phi(grid, p, d, t), k)
            for name, res in (("n", res_n), ("phi", res_phi)):
                rows.append([m, k, s, t, ib, name, res])
                checks.append(CheckResult(
                    name=f"rate_{name}[t={_fmt(t)},I={_fmt(ib)}]", passed=res <= tol, value=res, bound=tol,
                ))

    dumps = None
    if req.dump_operators:
        h0 = build_hamiltonian(grid, JJParams(EJ=p_base.EJ, EC=p_base.EC, Ibias=i_values[0]), t_values[0])
        dumps = {
            "number_operator": matrix_csv(n_op.entries),
            "phase_operator": matrix_csv(phi_op.entries),
            "hamiltonian": matrix_csv(h0.entries),
        }
    return _report("verify-identities", params, columns, rows, checks, dumps)


def _raw_rate_defect(a: OperatorMatrix, h: OperatorMatrix, d: Deformation) -> float:
    """Hermiticity defect of the literal product form, before symmetrization."""
    u = unitary_phase_exp(a, d.s)
    raw = u.conj().T @ (u @ h.entries - h.entries @ u) / (1j * 1j * d.s)
    return float(np.abs(raw - raw.conj().T).max())


def _run_rates(req: ScenarioRequest) -> ScenarioReport:
    m = req.M if req.M is not None else 128
    s = _resolve_s(req, 1.0)
    t = req.t if req.t is not None else 0.0
    ib = req.I if req.I is not None else 0.0
    p = JJParams(EJ=req.EJ if req.EJ is not None else 1.0, EC=req.EC if req.EC is not None else 0.05, Ibias=ib)
    tol = req.tol if req.tol is not None else 1e-12

    grid = make_grid(m)
    d = Deformation(s)
    h = build_hamiltonian(grid, p, t)
    params = {"M": m, "s": s, "t": t, "I": ib, "EJ": p.EJ, "EC": p.EC, "tol": tol}
    columns = ["M", "s", "observable", "comparison", "max_abs_diff", "bound"]
    rows: list[list[Any]] = []
    checks: list[CheckResult] = []

    for name, op in (("n", number_operator(grid)), ("phi", phase_function_operator(grid, "angle"))):
        gen = generalized_rate(op, h, d)
        std = standard_rate(op, h)
        dist_std = max_entry_diff(gen, std)
        if s == 0.0:
            rows.append([m, s, name, "generalized_vs_standard", dist_std, tol])
            checks.append(CheckResult(name=f"limit_{name}", passed=dist_std <= tol, value=dist_std, bound=tol))
        else:
            rows.append([m, s, name, "generalized_vs_standard", dist_std, float("nan")])
            conj = conjugation_form(op, h, d)
            dist_conj = max_entry_diff(gen, conj)
            rows.append([m, s, name, "generalized_vs_conjugation", dist_conj, tol])
            checks.append(CheckResult(name=f"two_forms_{name}", passed=dist_conj <= tol, value=dist_conj, bound=tol))
            defect = _raw_rate_defect(op, h, d)
            herm_tol = tol * max(1.0, float(np.abs(h.entries).max()))
            rows.append([m, s, name, "hermiticity_defect", defect, herm_tol])
            checks.append(CheckResult(name=f"hermitian_{name}", passed=defect <= herm_tol, value=defect, bound=herm_tol))
    return _report("rates", params, columns, rows, checks)


def _s_grid(s_min: float, s_max: float, s_step: float) -> list[float]:
    count = int(round((s_max - s_min) / s_step))
    if count < 0:
        raise ConfigurationError(f"empty sweep: s_min={s_min} > s_max={s_max}")
    return [s_min + i * s_step for i in range(count + 1)]


def _run_fraunhofer(req: ScenarioRequest) -> ScenarioReport:
    s_min = req.s_min if req.s_min is not None else -4.0 * math.pi
    s_max = req.s_max if req.s_max is not None else 4.0 * math.pi
    s_step = req.s_step if req.s_step is not None else math.pi / 8.0
    p = JJParams(EJ=req.EJ if req.EJ is not None else 1.0, EC=req.EC if req.EC is not None else 0.5)
    tol = req.tol if req.tol is not None else 1e-3
    t_max = req.T if req.T is not None else 200.0
    dt = req.dt if req.dt is not None else 1e-3

    s_values = _s_grid(s_min, s_max, s_step)
    params = {"s_min": s_min, "s_max": s_max, "s_step": s_step, "EJ": p.EJ, "EC": p.EC,
              "bisection_tol": tol, "T": t_max, "dt": dt,
              "rel_bound": 2e-2, "abs_bound": 5e-3, "formula_floor": classical.REL_ERROR_FLOOR}
    columns = ["s", "I_switch", "formula", "rel_error"]
    results = classical.fraunhofer_scan(p, s_values, tol=tol, t_max=t_max, dt=dt)
    rows = [[r.s, r.i_switch, r.formula_value, r.rel_error] for r in results]
    checks = []
    for r in results:
        if r.formula_value >= classical.REL_ERROR_FLOOR:
            checks.append(CheckResult(
                name=f"rel_error[s={_fmt(r.s)}]", passed=r.rel_error <= 2e-2, value=r.rel_error, bound=2e-2,
            ))
        else:
            abs_err = abs(r.i_switch - r.formula_value)
            checks.append(CheckResult(
                name=f"abs_error[s={_fmt(r.s)}]", passed=abs_err <= 5e-3, value=abs_err, bound=5e-3,
            ))
    return _report("fraunhofer", params, columns, rows, checks)


def _run_evolve(req: ScenarioRequest) -> ScenarioReport:
    m = req.M if req.M is not None else 128
    s = _resolve_s(req, 1.0)
    p = JJParams(
        EJ=req.EJ if req.EJ is not None else 1.0,
        EC=req.EC if req.EC is not None else 0.04,
        Ibias=req.I if req.I is not None else 0.0,
    )
    t_final = req.T if req.T is not None else 20.0
    dt = req.dt if req.dt is not None else 1e-3
    sample_every = req.sample_every if req.sample_every is not None else 10
    width = req.width if req.width is not None else ground_packet_width(p)
    phi0 = req.phi0 if req.phi0 is not None else (static_phase(p, Deformation(0.0)) or 0.0)
    n0 = req.n0 if req.n0 is not None else 0.0

    grid = make_grid(m)
    psi0 = gaussian_wavepacket(grid, phi0, n0, width)
    trace = quantum.propagate(psi0, grid, p, t_final, dt, d=Deformation(s), sample_every=sample_every)

    params = {"M": m, "s": s, "EJ": p.EJ, "EC": p.EC, "I": p.Ibias, "T": t_final, "dt": dt,
              "sample_every": sample_every, "phi0": phi0, "n0": n0, "width": width}
    columns = ["t", "exp_n", "exp_cos", "exp_sin", "Re(exp_qn)", "Im(exp_qn)", "norm"]
    rows = [
        [t, en, ec, es, qn.real, qn.imag, nm]
        for t, en, es, ec, qn, nm in zip(
            trace.times, trace.exp_n, trace.exp_sinphi, trace.exp_cosphi, trace.exp_qn, trace.norm
        )
    ]
    drift = float(np.abs(trace.norm - 1.0).max())
    checks = [CheckResult(name="norm_drift", passed=drift <= 1e-10, value=drift, bound=1e-10)]
    return _report("evolve", params, columns, rows, checks)


def _run_ring_spectrum(req: ScenarioRequest) -> ScenarioReport:
    s_min = req.s_min if req.s_min is not None else 0.0
    s_max = req.s_max if req.s_max is not None else 2.0
    s_step = req.s_step if req.s_step is not None else 0.25
    k_levels = req.k_levels if req.k_levels is not None else 10
    v0 = req.v0 if req.v0 is not None else 1.0
    inertia = req.inertia if req.inertia is not None else 1.0
    m = req.M if req.M is not None else 128

    grid = make_grid(m)
    s_values = _s_grid(s_min, s_max, s_step)
    params = {"s_min": s_min, "s_max": s_max, "s_step": s_step, "k": k_levels,
              "V0": v0, "inertia": inertia, "M_start": m}
    columns = ["s", "level_index", "energy"]
    rows: list[list[Any]] = []
    checks = []
    for s in s_values:
        result = spectrum(grid, RingParams(inertia=inertia, v0=v0, s=s), k_levels)
        for idx, energy in enumerate(result.energies):
            rows.append([s, idx, float(energy)])
        checks.append(CheckResult(
            name=f"converged[s={_fmt(s)}]", passed=result.converged,
            value=float(result.grid_size), bound=float(result.grid_size),
            detail="grid size at convergence" if result.converged else "still moving at largest grid",
        ))
    return _report("ring-spectrum", params, columns, rows, checks)


def _run_equivalence(req: ScenarioRequest) -> ScenarioReport:
    m = req.M if req.M is not None else 256
    k = req.K if req.K is not None else m // 4
    s = _resolve_s(req, 1.0)
    t = req.t if req.t is not None else 0.0
    p = JJParams(
        EJ=req.EJ if req.EJ is not None else 1.0,
        EC=req.EC if req.EC is not None else 0.05,
        Ibias=req.I if req.I is not None else 0.0,
    )
    phi0 = req.phi0 if req.phi0 is not None else 0.5
    n0 = req.n0 if req.n0 is not None else 3.0
    width = req.width if req.width is not None else 0.3

    grid = make_grid(m)
    d = Deformation(s)
    h = build_hamiltonian(grid, p, t)
    h_s = build_deformed_hamiltonian(grid, p, d, t)
    n_op = number_operator(grid)
    phi_op = phase_function_operator(grid, "angle")
    psi = gaussian_wavepacket(grid, phi0, n0, width)

    res_n = interior_residual(grid, standard_rate(n_op, h_s), generalized_rate(n_op, h, d), k)
    a_phi = standard_rate(phi_op, h_s)
    b_phi = generalized_rate(phi_op, h, d)
    res_phi = float(abs(np.vdot(psi.amplitudes, (a_phi.entries - b_phi.entries) @ psi.amplitudes)))
    ejp_pi = abs(ej_prime(p.EJ, Deformation(math.pi)) - 2.0 * p.EJ / math.pi)
    ejp_2pi = abs(ej_prime(p.EJ, Deformation(2.0 * math.pi)))

    params = {"M": m, "K": k, "s": s, "t": t, "I": p.Ibias, "EJ": p.EJ, "EC": p.EC,
              "phi0": phi0, "n0": n0, "width": width}
    columns = ["M", "K", "s", "t", "I", "channel", "level", "residual", "bound"]
    rows = [
        [m, k, s, t, p.Ibias, "n", "matrix_interior", res_n, 1e-10],
        [m, k, s, t, p.Ibias, "phi", "wavepacket_expectation", res_phi, 1e-6],
        [m, k, s, t, p.Ibias, "ej_prime", "s=pi", ejp_pi, 1e-15],
        [m, k, s, t, p.Ibias, "ej_prime", "s=2pi", ejp_2pi, 1e-15],
    ]
    checks = [
        CheckResult(name="n_channel_matrix", passed=res_n <= 1e-10, value=res_n, bound=1e-10),
        CheckResult(name="phi_channel_expectation", passed=res_phi <= 1e-6, value=res_phi, bound=1e-6),
        CheckResult(name="ej_prime_pi", passed=ejp_pi <= 1e-15, value=ejp_pi, bound=1e-15),
        CheckResult(name="ej_prime_2pi", passed=ejp_2pi <= 1e-15, value=ejp_2pi, bound=1e-15),
    ]
    return _report("equivalence", params, columns, rows, checks)


def _run_qplane(req: ScenarioRequest) -> ScenarioReport:
    m = req.M if req.M is not None else 256
    k = req.K if req.K is not None else m // 4
    s = _resolve_s(req, 1.0)

    grid = make_grid(m)
    report = verify_qplane(grid, Deformation(s), k=k)
    params = {"M": m, "K": k, "s": s}
    columns = ["M", "s", "commensurate", "residual_full", "residual_interior"]
    rows = [[m, s, report.commensurate, report.residual_full, report.residual_interior]]
    wrap_gap = abs(report.wrap_residual - report.wrap_expected)
    checks = [
        CheckResult(name="interior", passed=report.residual_interior <= 1e-12,
                    value=report.residual_interior, bound=1e-12),
        CheckResult(name="wrap_support", passed=report.offwrap_residual <= 1e-12,
                    value=report.offwrap_residual, bound=1e-12,
                    detail="residual with the wrap entry removed"),
        CheckResult(name="wrap_factor", passed=wrap_gap <= 1e-10, value=wrap_gap, bound=1e-10,
                    detail="distance to |exp(-isM)-1|"),
    ]
    if report.commensurate:
        checks.append(CheckResult(name="commensurate_exact", passed=report.residual_full <= 1e-12,
                                  value=report.residual_full, bound=1e-12))
    return _report("qplane", params, columns, rows, checks)


SCENARIOS: dict[str, Callable[[ScenarioRequest], ScenarioReport]] = {
    "verify-identities": _run_verify_identities,
    "rates": _run_rates,
    "fraunhofer": _run_fraunhofer,
    "evolve": _run_evolve,
    "ring-spectrum": _run_ring_spectrum,
    "equivalence": _run_equivalence,
    "qplane": _run_qplane,
}


def run_scenario(name: str, req: ScenarioRequest) -> ScenarioReport:
    if name not in SCENARIOS:
        raise ConfigurationError(f"unknown scenario {name!r}; expected one of {sorted(SCENARIOS)}")
    return SCENARIOS[name](req)
