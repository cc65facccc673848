"""Spectral quantum dynamics on a sphere of radius R.

Wave functions are stored as spherical-harmonic coefficients c[l, m + lmax]
(orthonormal harmonics on the unit sphere, so sum |c|^2 R^2 = 1). Sampling uses
Gauss-Legendre latitudes and equispaced longitudes, exact for band-limited data.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.special import roots_legendre, sph_harm_y

from ..config import config
from ..errors import (
    DegenerateStateError,
    InvalidArgumentError,
    NonFiniteFieldError,
    NormalizationError,
)
from ..fields import ComplexArray, FloatArray
from ..madelung import PhysParams
from .geometry import geometric_potential, sphere_surface

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SphereGrid:
    """Gauss-Legendre x equispaced sampling with analysis band limit lmax."""

    lmax: int
    nlat: int
    nlon: int

    def __post_init__(self) -> None:
        if self.lmax < 0:
            raise InvalidArgumentError(f"lmax must be >= 0, got {self.lmax}")
        if self.nlat < self.lmax + 1:
            raise InvalidArgumentError("nlat must be at least lmax + 1")
        if self.nlon < 2 * self.lmax + 1:
            raise InvalidArgumentError("nlon must be at least 2 * lmax + 1")

    @cached_property
    def _nodes(self) -> tuple[FloatArray, FloatArray]:
        mu, weights = roots_legendre(self.nlat)
        return np.asarray(mu), np.asarray(weights)

    @property
    def weights(self) -> FloatArray:
        return self._nodes[1]

    @cached_property
    def theta(self) -> FloatArray:
        return np.arccos(self._nodes[0])

    @cached_property
    def phi(self) -> FloatArray:
        return 2.0 * np.pi * np.arange(self.nlon) / self.nlon

    @property
    def dphi(self) -> float:
        return 2.0 * np.pi / self.nlon

    @cached_property
    def mesh(self) -> tuple[FloatArray, FloatArray]:
        theta, phi = np.meshgrid(self.theta, self.phi, indexing="ij")
        return theta, phi

    @cached_property
    def m_values(self) -> FloatArray:
        return np.arange(-self.lmax, self.lmax + 1, dtype=float)

    @cached_property
    def ylm(self) -> FloatArray:
        """Y_l^m(theta_i, 0) as table[l, m + lmax, i]; zero for |m| > l."""
        table = np.zeros((self.lmax + 1, 2 * self.lmax + 1, self.nlat))
        for l in range(self.lmax + 1):
            for m in range(-l, l + 1):
                table[l, m + self.lmax] = np.real(sph_harm_y(l, m, self.theta, 0.0))
        return table

    @cached_property
    def dylm(self) -> FloatArray:
        """d/dtheta of ylm via m cot(theta) Y_l^m + sqrt((l-m)(l+m+1)) Y_l^(m+1)."""
        cot = np.cos(self.theta) / np.sin(self.theta)
        table = np.zeros_like(self.ylm)
        for l in range(self.lmax + 1):
            for m in range(-l, l + 1):
                j = m + self.lmax
                table[l, j] = m * cot * self.ylm[l, j]
                if m < l:
                    raising = np.sqrt((l - m) * (l + m + 1.0))
                    table[l, j] += raising * self.ylm[l, j + 1]
        return table

    @cached_property
    def _phase(self) -> ComplexArray:
        return np.exp(1j * np.outer(self.m_values, self.phi))


def make_sphere_grid(
    lmax: int, nlat: int | None = None, nlon: int | None = None
) -> SphereGrid:
    return SphereGrid(
        lmax=lmax,
        nlat=lmax + 1 if nlat is None else nlat,
        nlon=2 * lmax + 2 if nlon is None else nlon,
    )


def _degree_mask(lmax: int) -> FloatArray:
    l = np.arange(lmax + 1)[:, None]
    m = np.arange(-lmax, lmax + 1)[None, :]
    return (np.abs(m) <= l).astype(float)


@dataclass(frozen=True, eq=False)
class SphereState:
    """Band-limited function on the sphere; coeffs[l, m + lmax]."""

    lmax: int
    coeffs: ComplexArray
    radius: float = 1.0

    def __post_init__(self) -> None:
        coeffs = np.array(self.coeffs, dtype=np.complex128)
        if coeffs.shape != (self.lmax + 1, 2 * self.lmax + 1):
            raise InvalidArgumentError(
                f"coefficients for lmax={self.lmax} have shape {coeffs.shape}"
            )
        if not np.all(np.isfinite(coeffs)):
            raise NonFiniteFieldError("sphere coefficients are not finite")
        if not self.radius > 0.0:
            raise InvalidArgumentError(f"radius must be positive: {self.radius}")
        coeffs *= _degree_mask(self.lmax)
        coeffs.flags.writeable = False
        object.__setattr__(self, "coeffs", coeffs)

    @cached_property
    def degrees(self) -> FloatArray:
        return np.arange(self.lmax + 1, dtype=float)[:, None]

    def norm(self) -> float:
        return float(np.sum(np.abs(self.coeffs) ** 2) * self.radius**2)

    def require_normalized(self, tol: float = 1e-10) -> None:
        drift = abs(self.norm() - 1.0)
        if drift > tol:
            raise NormalizationError(f"sphere state norm is 1{drift:+.3e}")

    def coefficient(self, l: int, m: int) -> complex:
        return complex(self.coeffs[l, m + self.lmax])

    def with_coeffs(self, coeffs: np.ndarray) -> "SphereState":
        return SphereState(self.lmax, coeffs, self.radius)


def spherical_harmonic_state(
    l: int, m: int, radius: float = 1.0, lmax: int | None = None
) -> SphereState:
    """Normalized single harmonic Y_l^m / R."""
    lmax = l if lmax is None else lmax
    if not 0 <= l <= lmax or abs(m) > l:
        raise InvalidArgumentError(f"invalid harmonic (l={l}, m={m}, lmax={lmax})")
    coeffs = np.zeros((lmax + 1, 2 * lmax + 1), dtype=complex)
    coeffs[l, m + lmax] = 1.0 / radius
    return SphereState(lmax, coeffs, radius)


def superposition(
    modes: Sequence[tuple[int, int, complex]],
    radius: float = 1.0,
    lmax: int | None = None,
) -> SphereState:
    """Normalized sum of weighted harmonics (l, m, weight)."""
    if not modes:
        raise InvalidArgumentError("superposition needs at least one mode")
    lmax = max(l for l, _, _ in modes) if lmax is None else lmax
    coeffs = np.zeros((lmax + 1, 2 * lmax + 1), dtype=complex)
    for l, m, weight in modes:
        if not 0 <= l <= lmax or abs(m) > l:
            raise InvalidArgumentError(f"invalid harmonic (l={l}, m={m})")
        coeffs[l, m + lmax] += weight
    total = np.sqrt(np.sum(np.abs(coeffs) ** 2))
    if total == 0.0:
        raise DegenerateStateError("superposition weights sum to zero")
    return SphereState(lmax, coeffs / (total * radius), radius)


def _padded(state: SphereState, grid: SphereGrid) -> ComplexArray:
    if state.lmax > grid.lmax:
        raise InvalidArgumentError(
            f"state lmax {state.lmax} exceeds grid lmax {grid.lmax}"
        )
    out = np.zeros((grid.lmax + 1, 2 * grid.lmax + 1), dtype=complex)
    shift = grid.lmax - state.lmax
    out[: state.lmax + 1, shift : shift + 2 * state.lmax + 1] = state.coeffs
    return out


def _synthesize_table(
    coeffs: ComplexArray, table: FloatArray, grid: SphereGrid
) -> ComplexArray:
    per_order = np.einsum("lm,lmi->mi", coeffs, table)
    return per_order.T @ grid._phase


def synthesize(state: SphereState, grid: SphereGrid) -> ComplexArray:
    """Sample the state on the grid, shape (nlat, nlon)."""
    return _synthesize_table(_padded(state, grid), grid.ylm, grid)


def analyze(
    values: np.ndarray, grid: SphereGrid, radius: float = 1.0
) -> SphereState:
    """Project samples onto harmonics up to grid.lmax (no normalization)."""
    values = np.asarray(values)
    if values.shape != (grid.nlat, grid.nlon):
        raise InvalidArgumentError(f"samples have shape {values.shape}")
    per_order = (values @ np.conj(grid._phase).T) * grid.dphi
    coeffs = np.einsum("im,lmi,i->lm", per_order, grid.ylm, grid.weights)
    return SphereState(grid.lmax, coeffs, radius)


def laplace_beltrami(state: SphereState) -> SphereState:
    """Delta_S is diagonal: c_lm -> -l(l+1)/R^2 c_lm."""
    l = state.degrees
    return state.with_coeffs(-l * (l + 1.0) / state.radius**2 * state.coeffs)


def level_energies(state: SphereState, p: PhysParams) -> FloatArray:
    l = state.degrees
    return p.hbar**2 * l * (l + 1.0) / (2.0 * p.m * state.radius**2)


def step_sphere_schrodinger(
    state: SphereState, dt: float, p: PhysParams
) -> SphereState:
    """Exact propagation c_lm -> c_lm exp(-i (E_l + V_s) dt / hbar)."""
    state.require_normalized()
    # V_s is constant on a sphere, so it only rotates the global phase
    v_s = geometric_potential(sphere_surface(state.radius), np.pi / 2, 0.0, p)
    energies = level_energies(state, p) + float(v_s)
    return state.with_coeffs(state.coeffs * np.exp(-1j * energies * dt / p.hbar))


def overlap(a: SphereState, b: SphereState) -> complex:
    """<a|b> including the R^2 area factor."""
    if a.lmax != b.lmax or a.radius != b.radius:
        raise InvalidArgumentError("overlap needs states on the same basis")
    return complex(np.sum(np.conj(a.coeffs) * b.coeffs) * a.radius**2)


def surface_integral(values: np.ndarray, grid: SphereGrid, radius: float) -> float:
    """Integral over the sphere of radius R, dS = R^2 dOmega."""
    per_lat = np.sum(values, axis=1) * grid.dphi
    return float(np.real(np.dot(grid.weights, per_lat)) * radius**2)


def _gradient_coeffs(
    coeffs: ComplexArray, grid: SphereGrid, radius: float
) -> tuple[ComplexArray, ComplexArray]:
    d_theta = _synthesize_table(coeffs, grid.dylm, grid)
    d_phi = _synthesize_table(coeffs * (1j * grid.m_values)[None, :], grid.ylm, grid)
    sin_theta = np.sin(grid.theta)[:, None]
    return d_theta / radius, d_phi / (radius * sin_theta)


def surface_gradient(
    values: np.ndarray, grid: SphereGrid, radius: float
) -> tuple[FloatArray, FloatArray]:
    """Orthonormal (theta, phi) components of the tangential gradient of real data."""
    coeffs = analyze(values, grid, radius).coeffs
    g_theta, g_phi = _gradient_coeffs(coeffs, grid, radius)
    return np.real(g_theta), np.real(g_phi)


@dataclass(frozen=True, eq=False)
class SurfaceHydroState:
    """Tangential fluid fields on a sphere grid (orthonormal components).

    quantum_potential, when present, was evaluated spectrally from the wave
    function; otherwise consumers derive it from rho.
    """

    grid: SphereGrid
    radius: float
    rho: FloatArray
    v_theta: FloatArray
    v_phi: FloatArray
    v_normal: FloatArray | None = None
    quantum_potential: FloatArray | None = None

    def __post_init__(self) -> None:
        shape = (self.grid.nlat, self.grid.nlon)
        for name in ("rho", "v_theta", "v_phi", "v_normal", "quantum_potential"):
            value = getattr(self, name)
            if value is None:
                continue
            value = np.array(value, dtype=float)
            if value.shape != shape:
                raise InvalidArgumentError(f"{name} has shape {value.shape}")
            if not np.all(np.isfinite(value)):
                raise NonFiniteFieldError(f"{name} has non-finite samples")
            value.flags.writeable = False
            object.__setattr__(self, name, value)

    def speed_squared(self) -> FloatArray:
        return self.v_theta**2 + self.v_phi**2


def _floor(rho: np.ndarray) -> float:
    return config.numerics.density_floor * float(np.max(rho))


def sphere_to_hydro(
    state: SphereState, grid: SphereGrid, p: PhysParams
) -> SurfaceHydroState:
    """Density, tangential current velocity and quantum potential on the grid."""
    state.require_normalized()
    coeffs = _padded(state, grid)
    psi = _synthesize_table(coeffs, grid.ylm, grid)
    rho = np.abs(psi) ** 2
    if not float(np.max(rho)) > 0.0:
        raise DegenerateStateError("sphere wave function vanishes on the grid")
    fl = _floor(rho)
    supported = rho > fl
    clamped = np.maximum(rho, fl)
    g_theta, g_phi = _gradient_coeffs(coeffs, grid, state.radius)
    scale = p.hbar / p.m
    current_theta = scale * np.imag(np.conj(psi) * g_theta) / clamped
    current_phi = scale * np.imag(np.conj(psi) * g_phi) / clamped
    v_theta = np.where(supported, current_theta, 0.0)
    v_phi = np.where(supported, current_phi, 0.0)
    # Q = -(hbar^2/2m) Re(Delta psi / psi) - m |v|^2 / 2
    lap = _synthesize_table(
        laplace_beltrami(SphereState(grid.lmax, coeffs, state.radius)).coeffs,
        grid.ylm,
        grid,
    )
    q = -(p.hbar**2 / (2.0 * p.m)) * np.real(np.conj(psi) * lap) / clamped
    q = np.where(supported, q - 0.5 * p.m * (v_theta**2 + v_phi**2), 0.0)
    logger.debug("sphere floor covers %d samples", int(np.count_nonzero(~supported)))
    return SurfaceHydroState(
        grid=grid,
        radius=state.radius,
        rho=rho,
        v_theta=v_theta,
        v_phi=v_phi,
        v_normal=np.zeros_like(rho),
        quantum_potential=q,
    )


def sphere_quantum_potential(
    rho: np.ndarray, grid: SphereGrid, radius: float, p: PhysParams
) -> FloatArray:
    """Q_t = -(hbar^2/2m) Delta_S sqrt(rho) / sqrt(rho) from the sampled density."""
    amplitude = np.sqrt(np.clip(rho, 0.0, None))
    lap = synthesize(laplace_beltrami(analyze(amplitude, grid, radius)), grid)
    fl = _floor(rho)
    clamped = np.maximum(amplitude, np.sqrt(fl))
    return -(p.hbar**2 / (2.0 * p.m)) * np.real(lap) / clamped
