"""The quantum constraint functional Z, its closed-form minimizer and certificates.

Z[a] = integral of rho * r(a)^2, with the residual
r(a) = a + v v' + (V' + gamma v + Q') / m.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from pydantic import BaseModel, Field

from .errors import ConstraintViolationError, InvalidArgumentError
from .fields import (
    FloatArray,
    Grid1D,
    RealField,
    derivative,
    integrate,
    require_same_grid,
)
from .madelung import HydroState, PhysParams, quantum_force
from .surface.geometry import geometric_potential, sphere_surface
from .surface.sphere import (
    SurfaceHydroState,
    sphere_quantum_potential,
    surface_gradient,
    surface_integral,
)

logger = logging.getLogger(__name__)


class AccelerationField(RealField):
    """Candidate dv/dt sampled on a grid."""


@dataclass(frozen=True, eq=False)
class ForceModel:
    """Impressed forces entering the functional.

    dV is the analytic potential gradient; when absent V is differentiated
    spectrally, which is only correct for periodic potentials.
    """

    V: RealField
    gamma: float = 0.0
    include_quantum: bool = True
    dV: RealField | None = None

    def __post_init__(self) -> None:
        if self.gamma < 0.0:
            raise InvalidArgumentError("gamma must be non-negative")
        if self.dV is not None:
            require_same_grid(self.V, self.dV)

    @classmethod
    def free(cls, grid: Grid1D, include_quantum: bool = True) -> "ForceModel":
        zero = RealField(grid, np.zeros(grid.n))
        return cls(V=zero, include_quantum=include_quantum, dV=zero)

    @property
    def grid(self) -> Grid1D:
        return self.V.grid

    def potential_gradient(self) -> RealField:
        return self.dV if self.dV is not None else derivative(self.V, 1)


def material_derivative(state: HydroState, a: AccelerationField) -> RealField:
    """Dv/Dt = a + v v'."""
    require_same_grid(state.v, a)
    dv = derivative(state.v, 1)
    return state.v.with_values(a.values + state.v.values * dv.values)


def impressed_acceleration(
    state: HydroState, f: ForceModel, p: PhysParams
) -> FloatArray:
    """(V' + gamma v + Q') / m, the acceleration deficit the flow must cancel."""
    require_same_grid(state.rho, f.V)
    total = f.potential_gradient().values.copy()
    if f.gamma > 0.0:
        total += f.gamma * state.v.values
    if f.include_quantum:
        total += quantum_force(state.rho, p).values
    return total / p.m


def residual_field(
    a: AccelerationField,
    state: HydroState,
    f: ForceModel,
    p: PhysParams,
) -> RealField:
    dvdt = material_derivative(state, a)
    return dvdt.with_values(dvdt.values + impressed_acceleration(state, f, p))


def evaluate_Z(
    a: AccelerationField,
    state: HydroState,
    f: ForceModel,
    p: PhysParams,
) -> float:
    state.require_normalized()
    r = residual_field(a, state, f, p)
    return integrate(state.rho.with_values(state.rho.values * r.values**2))


def minimize_Z(state: HydroState, f: ForceModel, p: PhysParams) -> AccelerationField:
    """Pointwise minimizer a* = -v v' - (V' + gamma v + Q') / m."""
    state.require_normalized()
    dv = derivative(state.v, 1)
    values = -state.v.values * dv.values - impressed_acceleration(state, f, p)
    return AccelerationField(state.grid, values)


def functional_gradient(
    a: AccelerationField, state: HydroState, f: ForceModel, p: PhysParams
) -> RealField:
    """dZ/da_j = 2 rho_j r_j dx."""
    r = residual_field(a, state, f, p)
    return r.with_values(2.0 * state.rho.values * r.values * state.grid.dx)


class MinimumCertificate(BaseModel):
    """Outcome of the randomized minimality check."""

    passed: bool
    trials: int = Field(ge=0)
    epsilon: float
    seed: int
    z_at_minimizer: float = Field(description="Z(a*), expected at round-off")
    worst_margin: float = Field(description="min over trials of Z(a*+eps d) - Z(a*)")
    worst_quadratic_error: float = Field(
        description="max relative gap to eps^2 * integral(rho d^2)"
    )
    negative_margins: int = 0


def band_limited_perturbations(
    grid: Grid1D, trials: int, seed: int
) -> list[AccelerationField]:
    """Random real fields built from the lowest n/4 modes, scaled to sup = 1."""
    rng = np.random.default_rng(seed)
    modes = grid.n // 4
    out = []
    for _ in range(trials):
        spectrum = np.zeros(grid.n // 2 + 1, dtype=complex)
        spectrum[: modes + 1] = rng.normal(size=modes + 1) + 1j * rng.normal(
            size=modes + 1
        )
        spectrum[0] = spectrum[0].real
        values = np.fft.irfft(spectrum, n=grid.n)
        out.append(AccelerationField(grid, values / np.max(np.abs(values))))
    return out


def verify_minimum(
    state: HydroState,
    f: ForceModel,
    p: PhysParams,
    trials: int = 100,
    epsilon: float = 1e-3,
    seed: int = 0,
    perturbations: Sequence[AccelerationField] | None = None,
    tolerance: float = 1e-8,
) -> MinimumCertificate:
    """Certify numerically that minimize_Z is the minimizer of Z.

    Z is exactly quadratic in a, so Z(a* + eps d) - Z(a*) must equal
    eps^2 * integral(rho d^2) and can never be negative.
    """
    if trials < 1 and perturbations is None:
        raise InvalidArgumentError("verify_minimum needs at least one trial")
    if epsilon < 0.0:
        raise InvalidArgumentError("epsilon must be non-negative")
    if perturbations is None:
        perturbations = band_limited_perturbations(state.grid, trials, seed)
    best = minimize_Z(state, f, p)
    z_best = evaluate_Z(best, state, f, p)
    worst_margin = np.inf
    worst_error = 0.0
    negative = 0
    for delta in perturbations:
        trial = AccelerationField(state.grid, best.values + epsilon * delta.values)
        margin = evaluate_Z(trial, state, f, p) - z_best
        expected = epsilon**2 * integrate(
            state.rho.with_values(state.rho.values * delta.values**2)
        )
        if expected > 0.0:
            error = abs(margin - expected) / expected
        else:
            error = abs(margin)
        if margin < 0.0:
            negative += 1
        worst_margin = min(worst_margin, margin)
        worst_error = max(worst_error, error)
    passed = negative == 0 and worst_error < tolerance
    if not passed:
        logger.warning(
            "Minimum certificate failed: %d negative margins, quadratic error %.3e",
            negative,
            worst_error,
        )
    return MinimumCertificate(
        passed=passed,
        trials=len(perturbations),
        epsilon=epsilon,
        seed=seed,
        z_at_minimizer=z_best,
        worst_margin=float(worst_margin),
        worst_quadratic_error=worst_error,
        negative_margins=negative,
    )


@dataclass(frozen=True, eq=False)
class SurfaceForceModel:
    """Impressed forces for motion on a sphere.

    potential is the external potential sampled on the sphere grid; normal
    acceleration is the impressed acceleration along the outward normal.
    """

    potential: FloatArray | None = None
    normal_acceleration: FloatArray | float = 0.0
    include_quantum: bool = True


@dataclass(frozen=True, eq=False)
class TangentialMinimum:
    a_theta: FloatArray
    a_phi: FloatArray
    residual: float


def _require_tangential(state: SurfaceHydroState, tol: float = 1e-12) -> None:
    if state.v_normal is None:
        return
    scale = max(float(np.max(np.sqrt(state.speed_squared()))), 1.0)
    if float(np.max(np.abs(state.v_normal))) > tol * scale:
        raise ConstraintViolationError("surface state has a normal velocity")


def _normal_mismatch(
    state: SurfaceHydroState, force: SurfaceForceModel
) -> FloatArray:
    # motion bound to the sphere has the centripetal normal acceleration -|v|^2/R
    kinematic = -state.speed_squared() / state.radius
    return kinematic - np.asarray(force.normal_acceleration, dtype=float)


def _tangential_reference(
    state: SurfaceHydroState, force: SurfaceForceModel, p: PhysParams
) -> tuple[FloatArray, FloatArray]:
    grid = state.grid
    theta, phi = grid.mesh
    v_s = geometric_potential(sphere_surface(state.radius), theta, phi, p)
    energy = v_s.copy()
    if force.potential is not None:
        energy = energy + np.asarray(force.potential, dtype=float)
    if force.include_quantum:
        q = state.quantum_potential
        if q is None:
            q = sphere_quantum_potential(state.rho, grid, state.radius, p)
        energy = energy + q
    # irrotational tangential flow: (v . grad) v = grad |v|^2 / 2
    head = 0.5 * state.speed_squared() + energy / p.m
    g_theta, g_phi = surface_gradient(head, grid, state.radius)
    return -g_theta, -g_phi


def evaluate_Z_tangent(
    a_theta: np.ndarray,
    a_phi: np.ndarray,
    state: SurfaceHydroState,
    p: PhysParams,
    force: SurfaceForceModel | None = None,
) -> float:
    """Tangential functional: rho-weighted squared gap to the reference acceleration.

    The normal part of the gap is fixed by the constraint and enters as a constant.
    """
    force = SurfaceForceModel() if force is None else force
    _require_tangential(state)
    ref_theta, ref_phi = _tangential_reference(state, force, p)
    gap = (
        (a_theta - ref_theta) ** 2
        + (a_phi - ref_phi) ** 2
        + _normal_mismatch(state, force) ** 2
    )
    return surface_integral(state.rho * gap, state.grid, state.radius)


def minimize_Z_tangent(
    state: SurfaceHydroState, p: PhysParams, force: SurfaceForceModel | None = None
) -> TangentialMinimum:
    """Minimize Z over tangential accelerations; returns the irreducible residual."""
    force = SurfaceForceModel() if force is None else force
    _require_tangential(state)
    a_theta, a_phi = _tangential_reference(state, force, p)
    residual = surface_integral(
        state.rho * _normal_mismatch(state, force) ** 2, state.grid, state.radius
    )
    return TangentialMinimum(a_theta=a_theta, a_phi=a_phi, residual=residual)
