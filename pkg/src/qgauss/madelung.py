"""Wave function <-> fluid variables, the quantum potential and identity checks.

The density floor is relative: floor = density_floor * max(rho). Quantities with a
0/0 structure (velocity from the current, the quantum potential) are evaluated with
the density clamped to that floor; stored densities are only clipped at zero.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .config import config
from .errors import (
    DegenerateStateError,
    InvalidArgumentError,
    MissingPhaseError,
    NormalizationError,
)
from .fields import (
    ComplexField,
    FloatArray,
    Grid1D,
    RealField,
    integrate,
    real_derivative,
    require_same_grid,
    spectral_derivative,
)

logger = logging.getLogger(__name__)

# evaluation region of the identity checks, relative to max(rho)
IDENTITY_REGION = 1e-6


class PhysParams(BaseModel):
    """Physical constants of a run."""

    model_config = ConfigDict(frozen=True)

    hbar: float = Field(default=1.0, ge=0.0, description="Reduced Planck constant")
    m: float = Field(default=1.0, gt=0.0, description="Particle mass")
    gamma: float = Field(default=0.0, ge=0.0, description="Friction coefficient")
    omega0: float = Field(default=1.0, ge=0.0, description="Oscillator frequency")
    classical_limit: bool = Field(
        default=False, description="Allow hbar = 0 (classical fluid)"
    )

    @model_validator(mode="after")
    def _hbar_positive_unless_classical(self) -> "PhysParams":
        if self.hbar == 0.0 and not self.classical_limit:
            raise ValueError("hbar must be positive outside classical-limit mode")
        return self


@dataclass(frozen=True, eq=False)
class HydroState:
    """Instantaneous fluid state: density, velocity and optional phase S."""

    rho: RealField
    v: RealField
    s: RealField | None = None

    def __post_init__(self) -> None:
        if self.s is None:
            require_same_grid(self.rho, self.v)
        else:
            require_same_grid(self.rho, self.v, self.s)
        if np.any(self.rho.values < 0.0):
            object.__setattr__(
                self, "rho", self.rho.with_values(np.clip(self.rho.values, 0.0, None))
            )

    @property
    def grid(self) -> Grid1D:
        return self.rho.grid

    def norm(self) -> float:
        return integrate(self.rho)

    def require_normalized(self, tol: float | None = None) -> None:
        tol = config.numerics.norm_tolerance if tol is None else tol
        drift = abs(self.norm() - 1.0)
        if drift > tol:
            raise NormalizationError(f"density integrates to 1{drift:+.3e}")


def density_floor(rho: np.ndarray) -> float:
    return config.numerics.density_floor * float(np.max(rho))


def floor_coverage(rho: RealField) -> float:
    """Measure of the region where the density sits at or below the floor."""
    fl = density_floor(rho.values)
    return float(np.count_nonzero(rho.values <= fl) * rho.grid.dx)


def _smoothstep(t: np.ndarray) -> np.ndarray:
    """C-infinity step from 0 (t <= 0) to 1 (t >= 1)."""
    t = np.clip(t, 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore"):
        a = np.where(t > 0.0, np.exp(-1.0 / np.where(t > 0.0, t, 1.0)), 0.0)
        b = np.where(t < 1.0, np.exp(-1.0 / np.where(t < 1.0, 1.0 - t, 1.0)), 0.0)
    return a / (a + b)


def support_weight(rho: np.ndarray) -> FloatArray:
    """Smooth window: 0 at or below the floor, 1 above floor * 10**support_decades."""
    peak = float(np.max(rho))
    if peak <= 0.0:
        return np.zeros_like(rho)
    lo = np.log10(config.numerics.density_floor)
    rel = np.maximum(rho / peak, 1e-300)
    return _smoothstep((np.log10(rel) - lo) / config.numerics.support_decades)


def normalize_density(rho: RealField) -> RealField:
    total = integrate(rho)
    if not total > 0.0:
        raise DegenerateStateError("density integrates to zero")
    return rho.with_values(rho.values / total)


def _require_wave_normalized(psi: ComplexField) -> None:
    drift = abs(psi.norm() - 1.0)
    if drift > 1e-8:
        raise NormalizationError(f"wave function norm is 1{drift:+.3e}")


def _require_nondegenerate(rho: np.ndarray, grid: Grid1D) -> None:
    # uniform density 1/L is the reference scale for an absolute floor
    reference = config.numerics.density_floor / grid.length
    if not float(np.max(rho)) >= 10.0 * reference:
        raise DegenerateStateError(
            f"max density {float(np.max(rho)):.3e} is below 10x floor {reference:.3e}"
        )


def extract_phase(psi: ComplexField, p: PhysParams) -> RealField:
    """Unwrapped phase S = hbar*arg(psi) anchored at the first grid point.

    Increments are wrapped into (-pi, pi]; where either neighbour is at or below the
    density floor the increment is zero, so S is held constant off the support.
    """
    values = psi.values
    rho = np.abs(values) ** 2
    _require_nondegenerate(rho, psi.grid)
    fl = density_floor(rho)
    supported = rho > fl
    steps = np.angle(values[1:] * np.conj(values[:-1]))
    steps = np.where(supported[1:] & supported[:-1], steps, 0.0)
    theta = np.angle(values[0]) + np.concatenate(([0.0], np.cumsum(steps)))
    return RealField(psi.grid, p.hbar * theta)


def to_hydro(psi: ComplexField, p: PhysParams) -> HydroState:
    """Madelung map psi -> (rho, v, s); v from the probability current."""
    if p.hbar == 0.0:
        raise InvalidArgumentError("a wave function needs hbar > 0")
    _require_wave_normalized(psi)
    rho = np.abs(psi.values) ** 2
    _require_nondegenerate(rho, psi.grid)
    fl = density_floor(rho)
    dpsi = spectral_derivative(psi.grid, psi.values, 1)
    current = np.imag(np.conj(psi.values) * dpsi)
    v = np.where(rho > fl, (p.hbar / p.m) * current / np.maximum(rho, fl), 0.0)
    return HydroState(
        rho=RealField(psi.grid, rho),
        v=RealField(psi.grid, v),
        s=extract_phase(psi, p),
    )


def from_hydro(state: HydroState, p: PhysParams) -> ComplexField:
    """Inverse map psi = sqrt(rho) exp(i s / hbar), normalized to 1e-10."""
    if state.s is None:
        raise MissingPhaseError("from_hydro needs the phase field s")
    if p.hbar == 0.0:
        raise InvalidArgumentError("a wave function needs hbar > 0")
    state.require_normalized()
    rho = normalize_density(state.rho).values
    psi = np.sqrt(rho) * np.exp(1j * state.s.values / p.hbar)
    return ComplexField(state.grid, psi)


def quantum_potential(rho: RealField, p: PhysParams) -> RealField:
    """Q = -(hbar^2/2m) (sqrt rho)'' / max(sqrt rho, sqrt floor)."""
    if p.hbar == 0.0:
        return rho.with_values(np.zeros(rho.grid.n))
    amplitude = np.sqrt(np.clip(rho.values, 0.0, None))
    fl = density_floor(rho.values)
    curvature = real_derivative(rho.grid, amplitude, 2)
    q = -(p.hbar**2 / (2.0 * p.m)) * curvature / np.maximum(amplitude, np.sqrt(fl))
    return rho.with_values(q)


def quantum_force(rho: RealField, p: PhysParams) -> RealField:
    """Gradient of Q from derivatives of the amplitude R = sqrt(rho).

    Q' = -(hbar^2/2m) (R'''/R - R'' R'/R^2). Only R is differentiated; the clamped
    denominators enter pointwise.
    """
    if p.hbar == 0.0:
        return rho.with_values(np.zeros(rho.grid.n))
    amplitude = np.sqrt(np.clip(rho.values, 0.0, None))
    clamped = np.maximum(amplitude, np.sqrt(density_floor(rho.values)))
    clamped = np.maximum(clamped, np.finfo(float).tiny)
    d1 = real_derivative(rho.grid, amplitude, 1)
    d2 = real_derivative(rho.grid, amplitude, 2)
    d3 = real_derivative(rho.grid, d2, 1)
    force = -(p.hbar**2 / (2.0 * p.m)) * (d3 - d2 * d1 / clamped) / clamped
    return rho.with_values(force)


def _identity_region(rho: np.ndarray) -> np.ndarray:
    return rho > IDENTITY_REGION * float(np.max(rho))


def log_identity_residual(rho: RealField) -> float:
    """sup |(sqrt rho)''/sqrt rho - (1/2 (ln rho)'' + 1/4 ((ln rho)')^2)|.

    Log-derivatives are formed from derivatives of rho itself, which stays
    periodic where ln rho does not.
    """
    values = np.clip(rho.values, 0.0, None)
    region = _identity_region(values)
    amplitude = np.sqrt(values)
    lhs = real_derivative(rho.grid, amplitude, 2)[region] / amplitude[region]
    d1 = real_derivative(rho.grid, values, 1)[region] / values[region]
    d2 = real_derivative(rho.grid, values, 2)[region] / values[region]
    dlog = d1
    ddlog = d2 - d1**2
    rhs = 0.5 * ddlog + 0.25 * dlog**2
    return float(np.max(np.abs(lhs - rhs)))


def phi_residual(
    psi: ComplexField, dpsi_dt: ComplexField, V: RealField, p: PhysParams
) -> float:
    """Residual of i hbar dPhi/dt = -(hbar^2/2m)(Phi'' + Phi'^2) + V, Phi = ln psi."""
    grid = require_same_grid(psi, dpsi_dt, V)
    rho = np.abs(psi.values) ** 2
    _require_nondegenerate(rho, grid)
    region = _identity_region(rho)
    values = psi.values[region]
    d1 = spectral_derivative(grid, psi.values, 1)[region]
    d2 = spectral_derivative(grid, psi.values, 2)[region]
    dphi = d1 / values
    ddphi = d2 / values - dphi**2
    dphi_dt = dpsi_dt.values[region] / values
    lhs = 1j * p.hbar * dphi_dt
    rhs = -(p.hbar**2 / (2.0 * p.m)) * (ddphi + dphi**2) + V.values[region]
    return float(np.max(np.abs(lhs - rhs)))


def quantum_hamilton_jacobi_rate(
    rho: RealField,
    v: RealField,
    s: RealField,
    V: RealField,
    p: PhysParams,
    gamma: float = 0.0,
    include_quantum: bool = True,
) -> RealField:
    """dS/dt = -(m v^2/2 + V + Q) - gamma S / m.

    Uses v instead of S' so the non-periodic phase is never differentiated.
    """
    require_same_grid(rho, v, s, V)
    rate = -(0.5 * p.m * v.values**2 + V.values)
    if include_quantum:
        rate = rate - quantum_potential(rho, p).values
    if gamma > 0.0:
        rate = rate - (gamma / p.m) * s.values
    return s.with_values(rate)
