"""Initial wave functions and potentials used by scenarios and tests."""

from collections.abc import Sequence

import numpy as np

from .constraint import ForceModel
from .errors import InvalidArgumentError
from .fields import ComplexField, Grid1D, RealField
from .madelung import PhysParams


def _normalized(grid: Grid1D, values: np.ndarray) -> ComplexField:
    norm = np.sqrt(np.sum(np.abs(values) ** 2) * grid.dx)
    return ComplexField(grid, values / norm)


def gaussian_packet(
    grid: Grid1D, sigma: float, x0: float = 0.0, k0: float = 0.0
) -> ComplexField:
    """Density N(x0, sigma^2) with plane-wave boost exp(i k0 x)."""
    if not sigma > 0.0:
        raise InvalidArgumentError(f"sigma must be positive: {sigma}")
    x = grid.x
    values = np.exp(-((x - x0) ** 2) / (4.0 * sigma**2) + 1j * k0 * x)
    return _normalized(grid, values)


def plane_wave(grid: Grid1D, k: float) -> ComplexField:
    return ComplexField(grid, np.exp(1j * k * grid.x) / np.sqrt(grid.length))


def coherent_state(
    grid: Grid1D, p: PhysParams, x0: float = 0.0, p0: float = 0.0
) -> ComplexField:
    """Displaced oscillator ground state; width sqrt(hbar / 2 m omega0)."""
    sigma = np.sqrt(p.hbar / (2.0 * p.m * p.omega0))
    return gaussian_packet(grid, sigma, x0=x0, k0=p0 / p.hbar)


def harmonic_ground_state(grid: Grid1D, p: PhysParams) -> ComplexField:
    return coherent_state(grid, p)


def two_bump(
    grid: Grid1D, separation: float = 4.0, sigma: float = 1.0
) -> ComplexField:
    """Node-free superposition of two real Gaussians."""
    x = grid.x
    half = separation / 2.0
    values = np.exp(-((x - half) ** 2) / (4.0 * sigma**2)) + np.exp(
        -((x + half) ** 2) / (4.0 * sigma**2)
    )
    return _normalized(grid, values.astype(complex))


def polynomial_potential(
    grid: Grid1D, coeffs: Sequence[float]
) -> tuple[RealField, RealField]:
    """V = sum c_i x^i with its analytic gradient."""
    poly = np.polynomial.Polynomial(list(coeffs) or [0.0])
    return RealField(grid, poly(grid.x)), RealField(grid, poly.deriv()(grid.x))


def harmonic_coeffs(p: PhysParams) -> list[float]:
    return [0.0, 0.0, 0.5 * p.m * p.omega0**2]


def harmonic_force(
    grid: Grid1D, p: PhysParams, gamma: float | None = None
) -> ForceModel:
    V, dV = polynomial_potential(grid, harmonic_coeffs(p))
    return ForceModel(V=V, gamma=p.gamma if gamma is None else gamma, dV=dV)


def canonical_states(
    grid: Grid1D, p: PhysParams
) -> dict[str, tuple[ComplexField, ForceModel]]:
    """The five reference states used to certify the minimizer."""
    free = ForceModel.free(grid)
    harmonic = harmonic_force(grid, p, gamma=0.0)
    return {
        "free_gaussian": (gaussian_packet(grid, 1.0), free),
        "boosted_gaussian": (gaussian_packet(grid, 1.0, k0=1.5), free),
        "harmonic_ground": (harmonic_ground_state(grid, p), harmonic),
        "coherent": (coherent_state(grid, p, x0=2.0, p0=0.5), harmonic),
        "two_bump": (two_bump(grid), free),
    }
