"""Time integration of continuity plus the (damped) quantum Euler equation.

The stepper advances the amplitude sqrt(rho) instead of rho, which keeps the
quantum force well conditioned down to the density floor. Off the fluid support
the velocity follows a smooth periodic continuation: linear across the support,
turning back over the longest floored stretch of the cell. A smooth window blends
the supported flow into it, so every differentiated field stays periodic.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from pydantic import BaseModel

from .config import config
from .constraint import (
    AccelerationField,
    ForceModel,
    impressed_acceleration,
    minimize_Z,
)
from .errors import (
    BlowUpError,
    CausticError,
    InvalidArgumentError,
    StabilityViolationError,
)
from .fields import (
    FloatArray,
    Grid1D,
    RealField,
    periodic_antiderivative,
    real_derivative,
    spectral_filter,
)
from .madelung import (
    IDENTITY_REGION,
    HydroState,
    PhysParams,
    density_floor,
    floor_coverage,
    quantum_hamilton_jacobi_rate,
    support_weight,
)
from .observables import density_moments, expectation, hydro_energy

logger = logging.getLogger(__name__)

# narrowest turn of the continuation profile, in grid spacings
MIN_TURN_WIDTH = 3.0

Rates = tuple[FloatArray, FloatArray, FloatArray | None]


def stability_limit(grid: Grid1D, p: PhysParams) -> float:
    """Largest admissible dt = C m dx^2 / hbar (unbounded for hbar = 0)."""
    if p.hbar == 0.0:
        return math.inf
    return config.numerics.stability_factor * p.m * grid.dx**2 / p.hbar


def _line_fit(x: np.ndarray, y: np.ndarray, w: np.ndarray) -> tuple[float, float]:
    total = float(np.sum(w))
    if total <= 0.0:
        return 0.0, 0.0
    xm = float(np.sum(w * x)) / total
    ym = float(np.sum(w * y)) / total
    spread = float(np.sum(w * (x - xm) ** 2))
    slope = float(np.sum(w * (x - xm) * (y - ym))) / spread if spread > 0.0 else 0.0
    return slope, ym - slope * xm


def _longest_run(mask: np.ndarray) -> tuple[int, int]:
    """Centre index and length of the longest cyclic run of True (length 0: none)."""
    if not mask.any():
        return 0, 0
    if mask.all():
        return mask.size // 2, mask.size
    start = int(np.argmin(mask))
    rolled = np.roll(mask, -start).astype(np.int8)
    edges = np.flatnonzero(np.diff(np.concatenate(([0], rolled, [0]))))
    begins, ends = edges[::2], edges[1::2]
    best = int(np.argmax(ends - begins))
    length = int(ends[best] - begins[best])
    return (start + int(begins[best]) + length // 2) % mask.size, length


def continuation_profile(grid: Grid1D, rho: np.ndarray) -> FloatArray:
    """Periodic stand-in for x with unit slope on the support.

    The slope dips through a normalized Gaussian centred on the longest floored
    stretch, which returns the profile to its starting value across the cell.
    """
    center, length = _longest_run(rho <= density_floor(rho))
    if length == 0:
        center = int(np.argmin(rho))
        logger.debug("Support covers the cell; turning at x=%.3f", grid.x[center])
    width = max(length * grid.dx / 16.0, MIN_TURN_WIDTH * grid.dx)
    half = 0.5 * grid.length
    offset = np.mod(grid.x - grid.x[center] + half, grid.length) - half
    dip = np.exp(-0.5 * (offset / width) ** 2)
    dip /= np.sum(dip) * grid.dx
    return periodic_antiderivative(grid, 1.0 - grid.length * dip)


def _continue(values: np.ndarray, rho: np.ndarray, profile: np.ndarray) -> FloatArray:
    """Blend values towards their rho-weighted fit c + b*profile off the support."""
    slope, offset = _line_fit(profile, values, rho)
    fit = offset + slope * profile
    return fit + support_weight(rho) * (values - fit)


def regularize_velocity(
    state: HydroState, profile: FloatArray | None = None
) -> HydroState:
    """Replace v off the support by its periodic continuation."""
    rho = state.rho.values
    if profile is None:
        profile = continuation_profile(state.grid, rho)
    v = _continue(state.v.values, rho, profile)
    return HydroState(state.rho, state.v.with_values(v), state.s)


def hydro_rhs(
    state: HydroState, f: ForceModel, p: PhysParams
) -> tuple[RealField, AccelerationField]:
    """(d rho/dt, dv/dt) = (-(rho v)', minimize_Z(state))."""
    flux = state.rho.values * state.v.values
    drho = state.rho.with_values(-real_derivative(state.grid, flux, 1))
    return drho, minimize_Z(state, f, p)


def _rates(
    amplitude: np.ndarray,
    v: np.ndarray,
    s: np.ndarray | None,
    f: ForceModel,
    p: PhysParams,
    profile: FloatArray,
) -> Rates:
    """Stage rates of (sqrt rho, v, s); continuity reads R_t = -(v R' + R v'/2)."""
    grid = f.grid
    rho = amplitude**2
    state = HydroState(RealField(grid, rho), RealField(grid, v))
    dv_dx = real_derivative(grid, v, 1)
    d_amplitude = -(v * real_derivative(grid, amplitude, 1) + 0.5 * amplitude * dv_dx)
    accel = -v * dv_dx - impressed_acceleration(state, f, p)
    ds = None
    if s is not None:
        ds = quantum_hamilton_jacobi_rate(
            state.rho,
            state.v,
            RealField(grid, s),
            f.V,
            p,
            gamma=f.gamma,
            include_quantum=f.include_quantum,
        ).values
    return d_amplitude, _continue(accel, rho, profile), ds


def _check_bounds(*fields: np.ndarray | None) -> None:
    limit = config.numerics.blowup_limit
    for values in fields:
        if values is None:
            continue
        if not np.all(np.isfinite(values)) or float(np.max(np.abs(values))) > limit:
            raise BlowUpError(f"field left [-{limit:g}, {limit:g}]")


def _check_caustic(rho: np.ndarray, v: np.ndarray) -> None:
    fl = density_floor(rho)
    near_node = (rho > fl) & (rho < config.numerics.caustic_density_factor * fl)
    fast = np.abs(v) > config.numerics.caustic_velocity
    if np.any(near_node & fast):
        raise CausticError(
            f"incipient caustic: |v| up to {float(np.max(np.abs(v[near_node]))):.3e} "
            "next to a density node"
        )


def _filtered(grid: Grid1D, values: np.ndarray) -> FloatArray:
    numerics = config.numerics
    return spectral_filter(
        grid, values, numerics.filter_strength, numerics.filter_order
    )


def step_hydro(
    state: HydroState, f: ForceModel, p: PhysParams, dt: float
) -> HydroState:
    """One classical Runge-Kutta step of (rho, v) and, when present, s.

    Normalization is checked on the accepted state only; the stages see raw
    amplitudes, and the step ends with a low-pass filter on amplitude and velocity.
    """
    if not dt > 0.0:
        raise InvalidArgumentError(f"dt must be positive: {dt}")
    limit = stability_limit(state.grid, p)
    if dt > limit * (1.0 + 1e-12):
        raise StabilityViolationError(
            f"dt={dt:.3e} exceeds the stability bound {limit:.3e}"
        )
    state.require_normalized()
    grid = state.grid
    profile = continuation_profile(grid, state.rho.values)
    state = regularize_velocity(state, profile)
    amplitude0 = np.sqrt(state.rho.values)
    v0 = state.v.values
    s0 = None if state.s is None else state.s.values

    def stage(k: Rates, h: float) -> Rates:
        s_next = None if s0 is None or k[2] is None else s0 + h * k[2]
        return amplitude0 + h * k[0], v0 + h * k[1], s_next

    k1 = _rates(amplitude0, v0, s0, f, p, profile)
    k2 = _rates(*stage(k1, 0.5 * dt), f, p, profile)
    k3 = _rates(*stage(k2, 0.5 * dt), f, p, profile)
    k4 = _rates(*stage(k3, dt), f, p, profile)

    def combine(i: int) -> FloatArray:
        total = k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]  # type: ignore[operator]
        return total / 6.0

    amplitude = _filtered(grid, amplitude0 + dt * combine(0))
    v = _filtered(grid, v0 + dt * combine(1))
    s = None if s0 is None else s0 + dt * combine(2)
    _check_bounds(amplitude, v, s)

    total = float(np.sum(amplitude**2) * grid.dx)
    drift = total - 1.0
    if abs(drift) > config.numerics.renormalize_tolerance:
        logger.debug("Renormalizing density, drift %.3e", drift)
        amplitude = amplitude / math.sqrt(total)
    rho = amplitude**2
    _check_caustic(rho, v)

    return HydroState(
        rho=RealField(grid, rho),
        v=RealField(grid, v),
        s=None if s is None else RealField(grid, s),
    )


class HydroDiagnostics(BaseModel):
    """Per-snapshot observables of a hydrodynamic run."""

    t: float
    norm: float
    mean_x: float
    variance: float
    mean_p: float
    energy: float
    kinetic: float
    irrotationality: float | None = None
    floor_measure: float


def irrotationality(state: HydroState, p: PhysParams) -> float | None:
    """sup |v - s'/m| on the support, s' from central differences."""
    if state.s is None:
        return None
    rho = state.rho.values
    region = rho > IDENTITY_REGION * float(np.max(rho))
    ds = np.gradient(state.s.values, state.grid.dx)
    return float(np.max(np.abs(state.v.values - ds / p.m)[region]))


def diagnostics(
    state: HydroState, f: ForceModel, p: PhysParams, t: float
) -> HydroDiagnostics:
    norm, mean, variance = density_moments(state.rho)
    return HydroDiagnostics(
        t=t,
        norm=norm,
        mean_x=mean,
        variance=variance,
        mean_p=p.m * expectation(state.rho, state.v.values),
        energy=hydro_energy(state.rho, state.v, f.V, p),
        kinetic=expectation(state.rho, state.v.values**2),
        irrotationality=irrotationality(state, p),
        floor_measure=floor_coverage(state.rho),
    )


@dataclass(frozen=True, eq=False)
class HydroTrajectory:
    times: FloatArray
    states: tuple[HydroState, ...]
    diagnostics: tuple[HydroDiagnostics, ...]

    def series(self, name: str) -> FloatArray:
        return np.array([getattr(row, name) for row in self.diagnostics], dtype=float)


def step_count(t_end: float, dt: float) -> tuple[int, float]:
    """Number of steps reaching t_end and the (never larger) step that lands on it."""
    if not t_end > 0.0 or not dt > 0.0:
        raise InvalidArgumentError("t_end and dt must be positive")
    steps = max(1, math.ceil(t_end / dt - 1e-9))
    return steps, t_end / steps


def run_hydro(
    initial: HydroState,
    f: ForceModel,
    p: PhysParams,
    t_end: float,
    dt: float,
    sample_every: int = 1,
) -> HydroTrajectory:
    if sample_every < 1:
        raise InvalidArgumentError("sample_every must be >= 1")
    steps, dt = step_count(t_end, dt)
    logger.info("Hydro run: %d steps of dt=%.3e on n=%d", steps, dt, initial.grid.n)
    state = initial
    times = [0.0]
    states = [state]
    rows = [diagnostics(state, f, p, 0.0)]
    for i in range(1, steps + 1):
        state = step_hydro(state, f, p, dt)
        if i % sample_every == 0 or i == steps:
            t = i * dt
            times.append(t)
            states.append(state)
            rows.append(diagnostics(state, f, p, t))
    return HydroTrajectory(
        times=np.array(times), states=tuple(states), diagnostics=tuple(rows)
    )
