"""Dispatch a validated scenario to the solvers and collect a RunReport."""

import hashlib
import logging
from collections.abc import Callable
from dataclasses import dataclass, field
from datetime import UTC, datetime

import numpy as np

from .. import __version__
from ..constraint import (
    ForceModel,
    evaluate_Z_tangent,
    minimize_Z_tangent,
    verify_minimum,
)
from ..errors import ConfigError, QGaussError
from ..fields import Grid1D, RealField, make_grid
from ..hydro import HydroTrajectory, run_hydro, step_count
from ..madelung import (
    IDENTITY_REGION,
    PhysParams,
    log_identity_residual,
    phi_residual,
    to_hydro,
)
from ..observables import classical_trajectory, free_variance
from ..oracle import WaveTrajectory, ehrenfest_residual, run_wave, schrodinger_rate
from ..states import (
    canonical_states,
    coherent_state,
    gaussian_packet,
    harmonic_coeffs,
    polynomial_potential,
)
from ..surface.geometry import geometric_potential, sphere_surface
from ..surface.sphere import (
    level_energies,
    make_sphere_grid,
    overlap,
    sphere_to_hydro,
    step_sphere_schrodinger,
    superposition,
)
from .schemas import (
    CheckResult,
    ErrorBlock,
    PlotFamily,
    Provenance,
    RunReport,
    ScenarioConfig,
)

logger = logging.getLogger(__name__)

NORM_TOLERANCE = 1e-6
WAVE_NORM_TOLERANCE = 1e-8
VARIANCE_TOLERANCE = 1e-3
CLASSICAL_VARIANCE_TOLERANCE = 1e-6
TRAJECTORY_TOLERANCE = 5e-3
EHRENFEST_TOLERANCE = 1e-3
# sup deviations below this count as exact agreement
LIMIT_DEVIATION_FLOOR = 1e-8
ENERGY_TOLERANCE = 1e-5
DENSITY_L2_TOLERANCE = 1e-3
VELOCITY_L2_TOLERANCE = 1e-2
QUADRATIC_LAW_TOLERANCE = 1e-8
Z_MINIMUM_TOLERANCE = 1e-16
IDENTITY_TOLERANCE = 1e-7
EIGENPHASE_TOLERANCE = 1e-9
SPHERE_POTENTIAL_TOLERANCE = 1e-12
SPHERE_MINIMIZER_TOLERANCE = 1e-7

HYDRO_COLUMNS = {
    "t": "time",
    "norm": "integral of rho",
    "mean_x": "<x>",
    "variance": "<x^2> - <x>^2",
    "mean_p": "<p> = m integral rho v",
    "energy": "hydrodynamic energy",
    "kinetic": "integral rho v^2",
    "floor_measure": "length of the floored region",
}

WAVE_COLUMNS = {
    "t": "time",
    "norm": "integral |psi|^2",
    "mean_x": "<x>",
    "variance": "<x^2> - <x>^2",
    "mean_p": "<p>",
    "energy": "<H> of the linear Hamiltonian",
}


@dataclass
class _Collector:
    """Mutable pieces of a report while a scenario runs."""

    notes: dict[str, str] = field(default_factory=dict)
    rows: list[list[float]] = field(default_factory=list)
    checks: list[CheckResult] = field(default_factory=list)
    families: dict[str, PlotFamily] = field(default_factory=dict)
    primary: str | None = None

    def check(
        self,
        name: str,
        value: float,
        threshold: float,
        detail: str = "",
        inclusive: bool = False,
    ) -> None:
        value = float(value)
        ok = value <= threshold if inclusive else value < threshold
        passed = bool(np.isfinite(value) and ok)
        if not passed:
            logger.warning("Check %s failed: %.3e vs %.3e", name, value, threshold)
        self.checks.append(
            CheckResult(
                name=name,
                passed=passed,
                value=value,
                threshold=threshold,
                detail=detail,
            )
        )

    def family(
        self,
        name: str,
        description: str,
        columns: dict[str, np.ndarray],
        primary: bool = False,
    ) -> None:
        table = np.column_stack([np.asarray(c, dtype=float) for c in columns.values()])
        self.families[name] = PlotFamily(
            description=description, columns=list(columns), rows=table.tolist()
        )
        if primary or self.primary is None:
            self.primary = name

    def table(self, columns: dict[str, str], values: dict[str, np.ndarray]) -> None:
        self.notes = dict(columns)
        data = np.column_stack([np.asarray(values[c], dtype=float) for c in columns])
        self.rows = data.tolist()


def _grid(cfg: ScenarioConfig) -> Grid1D:
    return make_grid(cfg.n, cfg.x_min, cfg.length)


def _params(cfg: ScenarioConfig, hbar: float | None = None) -> PhysParams:
    return PhysParams(
        hbar=cfg.hbar if hbar is None else hbar,
        m=cfg.m,
        gamma=cfg.gamma,
        omega0=cfg.omega0,
    )


def _potential(
    cfg: ScenarioConfig, grid: Grid1D, p: PhysParams
) -> tuple[RealField, RealField]:
    if cfg.potential == "harmonic":
        return polynomial_potential(grid, harmonic_coeffs(p))
    if cfg.potential == "polynomial":
        return polynomial_potential(grid, cfg.potential_coeffs)
    return polynomial_potential(grid, [0.0])


def _force(cfg: ScenarioConfig, V: RealField, dV: RealField) -> ForceModel:
    return ForceModel(V=V, gamma=cfg.gamma, include_quantum=cfg.include_quantum, dV=dV)


def _hydro_table(out: _Collector, traj: HydroTrajectory) -> None:
    out.table(HYDRO_COLUMNS, {name: traj.series(name) for name in HYDRO_COLUMNS})


def _wave_table(out: _Collector, traj: WaveTrajectory) -> None:
    out.table(WAVE_COLUMNS, {name: traj.series(name) for name in WAVE_COLUMNS})


def _classical_x(
    cfg: ScenarioConfig,
    times: np.ndarray,
    p: PhysParams,
    force: Callable[[float], float] | None = None,
) -> np.ndarray:
    x, _ = classical_trajectory(cfg.x0, cfg.hbar * cfg.k0, times, p, force=force)
    return x


def _polynomial_force(coeffs: list[float]) -> Callable[[float], float]:
    slope = np.polynomial.Polynomial(coeffs).deriv()

    def force(x: float) -> float:
        return -float(slope(x))

    return force


def _run_free_packet(cfg: ScenarioConfig, out: _Collector) -> None:
    grid = _grid(cfg)
    p = _params(cfg)
    V, dV = _potential(cfg, grid, p)
    psi0 = gaussian_packet(grid, cfg.sigma, x0=cfg.x0, k0=cfg.k0)
    traj = run_hydro(
        to_hydro(psi0, p), _force(cfg, V, dV), p, cfg.t_end, cfg.dt, cfg.sample_every
    )
    _hydro_table(out, traj)
    norm = traj.series("norm")
    out.check("norm_conservation", np.max(np.abs(norm - 1.0)), NORM_TOLERANCE)

    variance = traj.series("variance")
    if cfg.include_quantum:
        analytic = free_variance(cfg.sigma, traj.times, p)
        tolerance = VARIANCE_TOLERANCE
        law = "sigma0^2 (1 + (hbar t / 2 m sigma0^2)^2)"
    else:
        analytic = np.full_like(variance, cfg.sigma**2)
        tolerance = CLASSICAL_VARIANCE_TOLERANCE
        law = "sigma0^2 (no quantum force)"
    if cfg.potential == "free" and cfg.gamma == 0.0:
        error = np.max(np.abs(variance - analytic) / analytic)
        out.check("variance_law", error, tolerance, detail=law)
    out.family(
        "spreading",
        f"packet variance against {law}",
        {"t": traj.times, "variance": variance, "variance_analytic": analytic},
        primary=True,
    )
    out.family(
        "energy",
        "hydrodynamic energy and floored-region measure",
        {
            "t": traj.times,
            "energy": traj.series("energy"),
            "floor_measure": traj.series("floor_measure"),
        },
    )


def _run_harmonic(cfg: ScenarioConfig, out: _Collector) -> None:
    grid = _grid(cfg)
    p = _params(cfg)
    V, dV = _potential(cfg, grid, p)
    psi0 = gaussian_packet(grid, cfg.sigma, x0=cfg.x0, k0=cfg.k0)
    traj = run_hydro(
        to_hydro(psi0, p), _force(cfg, V, dV), p, cfg.t_end, cfg.dt, cfg.sample_every
    )
    _hydro_table(out, traj)
    out.check(
        "norm_conservation", np.max(np.abs(traj.series("norm") - 1.0)), NORM_TOLERANCE
    )
    mean_x = traj.series("mean_x")
    classical = _classical_x(cfg, traj.times, p, _polynomial_force(harmonic_coeffs(p)))
    if cfg.potential == "harmonic":
        out.check(
            "classical_trajectory",
            np.max(np.abs(mean_x - classical)),
            TRAJECTORY_TOLERANCE,
            detail="sup |<x> - x_classical|",
        )
    if cfg.gamma == 0.0:
        energy = traj.series("energy")
        drift = np.max(np.abs(energy - energy[0])) / max(abs(energy[0]), 1e-300)
        out.check("energy_conservation", drift, ENERGY_TOLERANCE)
    out.family(
        "trajectory",
        "packet centre and momentum against the classical oscillator",
        {
            "t": traj.times,
            "mean_x": mean_x,
            "mean_p": traj.series("mean_p"),
            "classical_x_oracle": classical,
        },
        primary=True,
    )


def _run_damped(cfg: ScenarioConfig, out: _Collector) -> None:
    grid = _grid(cfg)
    p = _params(cfg)
    V, dV = _potential(cfg, grid, p)
    psi0 = gaussian_packet(grid, cfg.sigma, x0=cfg.x0, k0=cfg.k0)
    traj = run_wave(psi0, V, p, cfg.t_end, cfg.dt, cfg.sample_every, method="kostin")
    _wave_table(out, traj)
    norm = traj.series("norm")
    out.check("norm_conservation", np.max(np.abs(norm - 1.0)), WAVE_NORM_TOLERANCE)
    out.check(
        "ehrenfest", ehrenfest_residual(traj, V, p, dV=dV), EHRENFEST_TOLERANCE
    )
    mean_x = traj.series("mean_x")
    if cfg.potential == "polynomial":
        coeffs = list(cfg.potential_coeffs)
    else:
        coeffs = harmonic_coeffs(p)
    classical = _classical_x(cfg, traj.times, p, _polynomial_force(coeffs))
    if cfg.potential == "harmonic":
        out.check(
            "classical_trajectory",
            np.max(np.abs(mean_x - classical)),
            TRAJECTORY_TOLERANCE,
            detail="sup |<x> - x_classical| for the damped oscillator",
        )
    out.family(
        "trajectory",
        "Kostin packet centre and momentum against the damped classical ODE",
        {
            "t": traj.times,
            "mean_x": mean_x,
            "mean_p": traj.series("mean_p"),
            "classical_x_oracle": classical,
        },
        primary=True,
    )


def _run_custom(cfg: ScenarioConfig, out: _Collector) -> None:
    grid = _grid(cfg)
    p = _params(cfg)
    V, dV = _potential(cfg, grid, p)
    psi0 = gaussian_packet(grid, cfg.sigma, x0=cfg.x0, k0=cfg.k0)
    method = "kostin" if cfg.gamma > 0.0 else cfg.method
    traj = run_wave(psi0, V, p, cfg.t_end, cfg.dt, cfg.sample_every, method=method)
    _wave_table(out, traj)
    norm = traj.series("norm")
    out.check("norm_conservation", np.max(np.abs(norm - 1.0)), WAVE_NORM_TOLERANCE)
    if len(traj.times) >= 3:
        out.check(
            "ehrenfest", ehrenfest_residual(traj, V, p, dV=dV), EHRENFEST_TOLERANCE
        )
    out.family(
        "moments",
        f"moments of the packet ({method} propagator)",
        {
            "t": traj.times,
            "mean_x": traj.series("mean_x"),
            "variance": traj.series("variance"),
            "mean_p": traj.series("mean_p"),
        },
        primary=True,
    )
    out.family(
        "energy",
        "<H> of the linear Hamiltonian",
        {"t": traj.times, "energy": traj.series("energy")},
    )


def _run_sphere(cfg: ScenarioConfig, out: _Collector) -> None:
    p = _params(cfg)
    modes = [(int(l), int(m), complex(w)) for l, m, w in cfg.sphere_modes]
    state0 = superposition(modes, radius=cfg.radius, lmax=cfg.lmax)
    grid = make_sphere_grid(cfg.lmax)
    steps, dt = step_count(cfg.t_end, cfg.dt)
    times = np.array(
        [i * dt for i in range(steps + 1) if i % cfg.sample_every == 0 or i == steps]
    )
    energies = level_energies(state0, p)

    norm = np.empty(len(times))
    autocorrelation = np.empty(len(times))
    energy = np.empty(len(times))
    occupied = [(l, m) for l, m, _ in modes if abs(state0.coefficient(l, m)) > 0.0]
    occupied = sorted(set(occupied))
    phases = np.empty((len(times), len(occupied)))
    for j, t in enumerate(times):
        state = step_sphere_schrodinger(state0, float(t), p) if t > 0.0 else state0
        norm[j] = state.norm()
        autocorrelation[j] = abs(overlap(state0, state)) ** 2
        energy[j] = float(np.sum(energies * np.abs(state.coeffs) ** 2) * cfg.radius**2)
        for k, (l, m) in enumerate(occupied):
            phases[j, k] = np.angle(state.coefficient(l, m) / state0.coefficient(l, m))

    out.table(
        {
            "t": "time",
            "norm": "sum |c_lm|^2 R^2",
            "autocorrelation": "|<psi(0)|psi(t)>|^2",
            "energy": "sum E_l |c_lm|^2 R^2",
        },
        {
            "t": times,
            "norm": norm,
            "autocorrelation": autocorrelation,
            "energy": energy,
        },
    )
    out.check("norm_conservation", np.max(np.abs(norm - 1.0)), 1e-10)

    if len(times) > 1:
        unwrapped = np.unwrap(phases, axis=0)
        worst = 0.0
        for k, (l, _) in enumerate(occupied):
            rate = -p.hbar * unwrapped[-1, k] / times[-1]
            expected = float(energies[l, 0])
            gap = abs(rate - expected)
            worst = max(worst, gap / expected if expected > 0.0 else gap)
        out.check(
            "eigenphase_rates",
            worst,
            EIGENPHASE_TOLERANCE,
            detail="E_l = hbar^2 l(l+1) / 2mR^2",
        )

    levels = sorted({float(energies[l, 0]) for l, _ in occupied})
    if len(levels) == 2:
        period = 2.0 * np.pi * p.hbar / (levels[1] - levels[0])
        revival = _first_revival(times, autocorrelation)
        if revival is not None:
            out.check(
                "revival_time",
                abs(revival - period),
                dt,
                detail=f"expected 2 pi hbar / dE = {period:.12g}",
                inclusive=True,
            )
        elif times[-1] >= period:
            out.check("revival_time", np.inf, dt, detail="no revival detected")

    theta, phi = grid.mesh
    v_s = geometric_potential(sphere_surface(cfg.radius), theta, phi, p)
    out.check(
        "geometric_potential_sphere",
        np.max(np.abs(v_s)),
        SPHERE_POTENTIAL_TOLERANCE,
    )

    hydro = sphere_to_hydro(state0, grid, p)
    minimum = minimize_Z_tangent(hydro, p)
    at_minimum = evaluate_Z_tangent(minimum.a_theta, minimum.a_phi, hydro, p)
    out.check(
        "tangential_minimum",
        abs(at_minimum - minimum.residual) / max(1.0, minimum.residual),
        1e-12,
        detail="Z at the tangential minimizer equals the normal residual",
    )
    supported = bool(np.all(hydro.rho > IDENTITY_REGION * np.max(hydro.rho)))
    if len(levels) == 1 and supported:
        magnitude = np.sqrt(minimum.a_theta**2 + minimum.a_phi**2)
        out.check(
            "stationary_minimizer", np.max(magnitude), SPHERE_MINIMIZER_TOLERANCE
        )

    out.family(
        "revival",
        "return probability of the initial superposition",
        {"t": times, "autocorrelation": autocorrelation},
        primary=True,
    )


def _first_revival(times: np.ndarray, signal: np.ndarray) -> float | None:
    """Time of the first local maximum after the signal has dropped below 1/2."""
    dropped = False
    for i in range(1, len(signal) - 1):
        if signal[i] < 0.5:
            dropped = True
        elif dropped and signal[i] >= signal[i - 1] and signal[i] >= signal[i + 1]:
            return float(times[i])
    return None


def _run_verify(cfg: ScenarioConfig, out: _Collector) -> None:
    grid = _grid(cfg)
    p = _params(cfg).model_copy(update={"gamma": 0.0})
    states = canonical_states(grid, p)
    rows = []
    for index, (label, (psi, force)) in enumerate(states.items()):
        state = to_hydro(psi, p)
        certificate = verify_minimum(
            state, force, p, trials=cfg.trials, epsilon=cfg.epsilon, seed=cfg.seed
        )
        log_residual = log_identity_residual(state.rho)
        phi = phi_residual(psi, schrodinger_rate(psi, force.V, p), force.V, p)
        out.check(
            f"{label}.margins",
            certificate.negative_margins,
            1.0,
            detail=f"{certificate.trials} perturbations, seed {cfg.seed}",
        )
        out.check(
            f"{label}.quadratic_law",
            certificate.worst_quadratic_error,
            QUADRATIC_LAW_TOLERANCE,
        )
        out.check(
            f"{label}.z_at_minimizer", certificate.z_at_minimizer, Z_MINIMUM_TOLERANCE
        )
        out.check(f"{label}.log_identity", log_residual, IDENTITY_TOLERANCE)
        out.check(f"{label}.phi_identity", phi, IDENTITY_TOLERANCE)
        rows.append(
            [
                0.0,
                float(index),
                certificate.z_at_minimizer,
                certificate.worst_margin,
                certificate.worst_quadratic_error,
                float(certificate.negative_margins),
                log_residual,
                phi,
            ]
        )
    data = np.array(rows)
    columns = {
        "t": "time (certificates are instantaneous)",
        "state": "index into " + ", ".join(states),
        "z_at_minimizer": "Z(a*)",
        "worst_margin": "min Z(a* + eps d) - Z(a*)",
        "worst_quadratic_error": "max relative gap to eps^2 integral rho d^2",
        "negative_margins": "perturbations that lowered Z",
        "log_identity": "log-derivative identity residual",
        "phi_identity": "Phi = ln psi equation residual",
    }
    out.table(columns, {name: data[:, i] for i, name in enumerate(columns)})
    out.family(
        "certificate",
        "minimality margins per canonical state",
        {
            "state": data[:, 1],
            "worst_margin": data[:, 3],
            "worst_quadratic_error": data[:, 4],
        },
        primary=True,
    )


def _run_compare(cfg: ScenarioConfig, out: _Collector) -> None:
    grid = _grid(cfg)
    p = _params(cfg)
    V, dV = _potential(cfg, grid, p)
    psi0 = gaussian_packet(grid, cfg.sigma, x0=cfg.x0, k0=cfg.k0)
    method = "kostin" if cfg.gamma > 0.0 else cfg.method
    force = ForceModel(V=V, gamma=cfg.gamma, dV=dV)
    hydro = run_hydro(to_hydro(psi0, p), force, p, cfg.t_end, cfg.dt, cfg.sample_every)
    wave = run_wave(psi0, V, p, cfg.t_end, cfg.dt, cfg.sample_every, method=method)

    density_gap = np.empty(len(hydro.times))
    velocity_gap = np.empty(len(hydro.times))
    for j, (state, psi) in enumerate(zip(hydro.states, wave.psis)):
        reference = to_hydro(psi, p)
        rho_ref = reference.rho.values
        density_gap[j] = np.sqrt(np.sum((state.rho.values - rho_ref) ** 2) * grid.dx)
        region = rho_ref > IDENTITY_REGION * float(np.max(rho_ref))
        mismatch = rho_ref * (state.v.values - reference.v.values) ** 2
        velocity_gap[j] = np.sqrt(np.sum(mismatch[region]) * grid.dx)

    out.table(
        {
            "t": "time",
            "rho_l2": "L2 norm of rho_hydro - rho_wave",
            "v_weighted_l2": "rho-weighted L2 norm of v_hydro - v_wave",
            "variance_hydro": "hydro packet variance",
            "variance_wave": "wave packet variance",
        },
        {
            "t": hydro.times,
            "rho_l2": density_gap,
            "v_weighted_l2": velocity_gap,
            "variance_hydro": hydro.series("variance"),
            "variance_wave": wave.series("variance"),
        },
    )
    out.check("density_agreement", density_gap[-1], DENSITY_L2_TOLERANCE)
    out.check("velocity_agreement", velocity_gap[-1], VELOCITY_L2_TOLERANCE)
    out.family(
        "agreement",
        f"hydrodynamic solver against the {method} wave function",
        {"t": hydro.times, "rho_l2": density_gap, "v_weighted_l2": velocity_gap},
        primary=True,
    )


def _run_classical_limit(cfg: ScenarioConfig, out: _Collector) -> None:
    grid = _grid(cfg)
    coeffs = [0.0, 0.0, 0.5 * cfg.m * cfg.omega0**2, 0.0, cfg.quartic]
    V, dV = polynomial_potential(grid, coeffs)
    force = ForceModel(V=V, gamma=cfg.gamma, dV=dV)
    momentum = cfg.hbar * cfg.k0
    columns: dict[str, list[float]] = {
        "t": [],
        "hbar": [],
        "mean_x": [],
        "classical_x": [],
        "deviation": [],
    }
    hbars = []
    deviations = []
    for factor in cfg.hbar_factors:
        hbar = cfg.hbar * factor
        p = _params(cfg, hbar=hbar)
        psi0 = coherent_state(grid, p, x0=cfg.x0, p0=momentum)
        logger.info("Classical-limit sweep: hbar=%.4g", hbar)
        traj = run_hydro(
            to_hydro(psi0, p), force, p, cfg.t_end, cfg.dt, cfg.sample_every
        )
        mean_x = traj.series("mean_x")
        classical, _ = classical_trajectory(
            cfg.x0, momentum, traj.times, p, force=_polynomial_force(coeffs)
        )
        deviation = np.abs(mean_x - classical)
        columns["t"].extend(traj.times)
        columns["hbar"].extend([hbar] * len(traj.times))
        columns["mean_x"].extend(mean_x)
        columns["classical_x"].extend(classical)
        columns["deviation"].extend(deviation)
        hbars.append(hbar)
        deviations.append(float(np.max(deviation)))

    out.table(
        {
            "t": "time",
            "hbar": "reduced Planck constant of this sweep member",
            "mean_x": "<x> from the hydrodynamic solver",
            "classical_x": "damped classical ODE",
            "deviation": "|<x> - x_classical|",
        },
        {name: np.array(values) for name, values in columns.items()},
    )
    floored = [max(d, LIMIT_DEVIATION_FLOOR) for d in deviations]
    ratios = [b / a for a, b in zip(floored, floored[1:])]
    out.check(
        "monotone_convergence",
        max(ratios),
        1.0,
        detail="largest ratio of successive sup deviations",
        inclusive=True,
    )
    out.family(
        "deviation",
        "sup |<x> - x_classical| per hbar",
        {"hbar": np.array(hbars), "max_deviation": np.array(deviations)},
        primary=True,
    )
    out.family(
        "trajectories",
        "packet centres of every sweep member",
        {name: np.array(columns[name]) for name in ("t", "hbar", "mean_x")}
        | {"classical_x": np.array(columns["classical_x"])},
    )


RUNNERS: dict[str, Callable[[ScenarioConfig, _Collector], None]] = {
    "free_packet": _run_free_packet,
    "harmonic": _run_harmonic,
    "damped_harmonic": _run_damped,
    "sphere": _run_sphere,
    "custom_potential": _run_custom,
    "verify_constraint": _run_verify,
    "compare_solvers": _run_compare,
    "classical_limit": _run_classical_limit,
}


def config_hash(cfg: ScenarioConfig) -> str:
    return hashlib.sha256(cfg.model_dump_json().encode("utf-8")).hexdigest()


def run_scenario(cfg: ScenarioConfig) -> RunReport:
    """Run one scenario; solver failures end up in the report's error block."""
    logger.info("Running scenario %s (%s)", cfg.name, cfg.kind)
    out = _Collector()
    error = None
    try:
        RUNNERS[cfg.kind](cfg, out)
    except ConfigError:
        raise
    except QGaussError as exc:
        logger.error("Scenario %s failed: %s", cfg.name, exc)
        error = ErrorBlock(type=type(exc).__name__, message=str(exc))
    report = RunReport(
        name=cfg.name,
        kind=cfg.kind,
        provenance=Provenance(
            config_sha256=config_hash(cfg),
            version=__version__,
            seed=cfg.seed,
            generated_at=datetime.now(UTC).isoformat(timespec="seconds"),
        ),
        columns=list(out.notes),
        column_notes=out.notes,
        rows=out.rows,
        checks=out.checks,
        families=out.families,
        primary_family=out.primary,
        error=error,
    )
    passed = sum(check.passed for check in report.checks)
    logger.info(
        "Scenario %s finished: %d/%d checks passed, exit code %d",
        cfg.name,
        passed,
        len(report.checks),
        report.exit_code,
    )
    return report
