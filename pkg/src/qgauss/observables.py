"""Pure observable helpers shared by the solvers and the scenario runner.

Operates on plain fields and arrays so hydro.py and oracle.py can both use it
without importing each other.
"""

from collections.abc import Callable

import numpy as np
from scipy.integrate import solve_ivp

from .fields import (
    ComplexField,
    FloatArray,
    RealField,
    real_derivative,
    spectral_derivative,
)
from .madelung import PhysParams, density_floor


def density_moments(rho: RealField) -> tuple[float, float, float]:
    """Return (norm, mean, variance) of a density."""
    x = rho.grid.x
    dx = rho.grid.dx
    norm = float(np.sum(rho.values) * dx)
    mean = float(np.sum(x * rho.values) * dx) / norm
    variance = float(np.sum((x - mean) ** 2 * rho.values) * dx) / norm
    return norm, mean, variance


def wave_momentum(psi: ComplexField, p: PhysParams) -> float:
    """<p> = hbar * integral Im(psi* psi')."""
    dpsi = spectral_derivative(psi.grid, psi.values, 1)
    return float(p.hbar * np.sum(np.imag(np.conj(psi.values) * dpsi)) * psi.grid.dx)


def wave_energy(psi: ComplexField, V: RealField, p: PhysParams) -> float:
    """<H> for the linear Hamiltonian, kinetic part evaluated in k-space."""
    grid = psi.grid
    spectrum = np.fft.fft(psi.values)
    # Parseval: sum |psi_j|^2 dx = (dx / n) sum |psi_k|^2
    kinetic = (
        p.hbar**2 / (2.0 * p.m) * np.sum(grid.k**2 * np.abs(spectrum) ** 2)
    ) * grid.dx / grid.n
    potential = np.sum(V.values * np.abs(psi.values) ** 2) * grid.dx
    return float(kinetic + potential)


def expectation(rho: RealField, values: np.ndarray) -> float:
    return float(np.sum(rho.values * values) * rho.grid.dx)


def hydro_energy(rho: RealField, v: RealField, V: RealField, p: PhysParams) -> float:
    """E = integral rho (m v^2 / 2 + V) + (hbar^2/8m) integral rho'^2 / rho."""
    values = np.clip(rho.values, 0.0, None)
    fl = max(density_floor(values), np.finfo(float).tiny)
    d1 = real_derivative(rho.grid, values, 1)
    fisher = np.sum(d1**2 / np.maximum(values, fl)) * rho.grid.dx
    flow = np.sum(values * (0.5 * p.m * v.values**2 + V.values)) * rho.grid.dx
    return float(flow + p.hbar**2 / (8.0 * p.m) * fisher)


def free_variance(sigma0: float, t: np.ndarray | float, p: PhysParams) -> FloatArray:
    """sigma0^2 (1 + (hbar t / 2 m sigma0^2)^2) for a free Gaussian at rest."""
    t = np.asarray(t, dtype=float)
    return sigma0**2 * (1.0 + (p.hbar * t / (2.0 * p.m * sigma0**2)) ** 2)


def classical_trajectory(
    x0: float,
    p0: float,
    times: np.ndarray,
    p: PhysParams,
    force: Callable[[float], float] | None = None,
) -> tuple[FloatArray, FloatArray]:
    """Integrate m x'' = F(x) - (gamma/m) p; F defaults to -m omega0^2 x.

    Returns (x(t), momentum(t)) sampled at `times`.
    """
    if force is None:

        def force(x: float) -> float:
            return -p.m * p.omega0**2 * x

    def rhs(_t: float, y: np.ndarray) -> list[float]:
        x, mom = y
        return [mom / p.m, force(x) - (p.gamma / p.m) * mom]

    times = np.asarray(times, dtype=float)
    sol = solve_ivp(
        rhs,
        (float(times[0]), float(times[-1])),
        [x0, p0],
        t_eval=times,
        method="DOP853",
        rtol=1e-11,
        atol=1e-13,
    )
    return sol.y[0], sol.y[1]
