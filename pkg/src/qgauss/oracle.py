"""Reference wave-function solvers and Ehrenfest diagnostics.

Three propagators share one interface: Strang split-step (spectral), Crank-Nicolson
with a fourth-order compact periodic Laplacian (cyclic tridiagonal), and the
frictional Kostin equation, whose nonlinearity acts as the real potential
(gamma/m)(S - <S>) inside the potential half-steps.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Literal, Protocol

import numpy as np
import scipy.sparse as sp
from pydantic import BaseModel
from scipy.sparse.linalg import splu

from .errors import InvalidArgumentError, LinearSolveError, TooFewSamplesError
from .fields import (
    ComplexArray,
    ComplexField,
    FloatArray,
    Grid1D,
    RealField,
    derivative,
    spectral_derivative,
)
from .madelung import PhysParams, extract_phase
from .observables import density_moments, wave_energy, wave_momentum

logger = logging.getLogger(__name__)

Method = Literal["splitstep", "crank_nicolson", "kostin"]


class Propagator(Protocol):
    def __call__(self, psi: ComplexField) -> ComplexField: ...


class SplitStepPropagator:
    """Half potential phase, full kinetic phase in k-space, half potential phase."""

    def __init__(self, V: RealField, p: PhysParams, dt: float) -> None:
        self.grid = V.grid
        self.V = V
        self.p = p
        self.dt = dt
        self._half_potential = np.exp(-0.5j * V.values * dt / p.hbar)
        self._kinetic = np.exp(-0.5j * p.hbar * self.grid.k**2 * dt / p.m)

    def kinetic(self, values: ComplexArray) -> ComplexArray:
        return np.fft.ifft(self._kinetic * np.fft.fft(values))

    def __call__(self, psi: ComplexField) -> ComplexField:
        values = self._half_potential * psi.values
        values = self.kinetic(values)
        return psi.with_values(self._half_potential * values)


def _cyclic_tridiagonal(n: int, diag: np.ndarray, off: complex) -> sp.csc_matrix:
    bands = [np.full(n - 1, off), diag, np.full(n - 1, off)]
    matrix = sp.diags(bands, offsets=[-1, 0, 1], format="lil")
    matrix[0, n - 1] = off
    matrix[n - 1, 0] = off
    return matrix.tocsc()


class CrankNicolsonPropagator:
    """Cayley step (1 + i dt H / 2 hbar)^-1 (1 - i dt H / 2 hbar).

    The kinetic operator is the compact fourth-order Laplacian M^-1 D with
    D = delta^2 / dx^2 and M = 1 + delta^2 / 12; both sides are multiplied by M so
    each step is a single cyclic tridiagonal solve.
    """

    def __init__(self, V: RealField, p: PhysParams, dt: float) -> None:
        if not np.isfinite(dt):
            raise LinearSolveError(f"non-finite time step {dt}")
        grid = V.grid
        n = grid.n
        self.grid = grid
        tau = dt / (2.0 * p.hbar)
        c = p.hbar**2 / (2.0 * p.m * grid.dx**2)
        # K = -c * delta^2 + M diag(V), split into its tridiagonal bands
        v = V.values
        main_k = 2.0 * c + (10.0 / 12.0) * v
        lower_k = -c + v[:-1] / 12.0  # row j+1, column j
        upper_k = -c + v[1:] / 12.0  # row j, column j+1
        mass = _cyclic_tridiagonal(n, np.full(n, 10.0 / 12.0), 1.0 / 12.0)
        stiffness = sp.diags(
            [lower_k, main_k, upper_k], offsets=[-1, 0, 1], format="lil"
        )
        stiffness[0, n - 1] = -c + v[n - 1] / 12.0
        stiffness[n - 1, 0] = -c + v[0] / 12.0
        stiffness = stiffness.tocsc()
        self._lhs = (mass + 1j * tau * stiffness).tocsc()
        self._rhs = (mass - 1j * tau * stiffness).tocsc()
        try:
            self._solver = splu(self._lhs)
        except RuntimeError as exc:
            raise LinearSolveError(f"factorization failed: {exc}") from exc

    def __call__(self, psi: ComplexField) -> ComplexField:
        values = self._solver.solve(self._rhs @ psi.values)
        if not np.all(np.isfinite(values)):
            raise LinearSolveError("Crank-Nicolson solve produced non-finite values")
        return psi.with_values(values)


class KostinPropagator:
    """Strang splitting with the friction potential (gamma/m)(S - <S>_rho).

    During a potential sub-step rho is frozen, so dS/dt = -V - g (S - <S>) with
    g = gamma/m is linear and integrated exactly.
    """

    def __init__(self, V: RealField, p: PhysParams, dt: float) -> None:
        self.p = p
        self.dt = dt
        self.V = V
        self._linear = SplitStepPropagator(V, p, dt)

    def potential_substep(self, psi: ComplexField, tau: float) -> ComplexField:
        p = self.p
        s0 = extract_phase(psi, p).values
        rho = np.abs(psi.values) ** 2
        weights = rho / np.sum(rho)
        s_mean = float(np.dot(weights, s0))
        v_mean = float(np.dot(weights, self.V.values))
        rate = p.gamma / p.m
        decayed = -np.expm1(-rate * tau)
        shift = (
            -v_mean * tau
            - (s0 - s_mean) * decayed
            - (self.V.values - v_mean) * decayed / rate
        )
        return psi.with_values(psi.values * np.exp(1j * shift / p.hbar))

    def __call__(self, psi: ComplexField) -> ComplexField:
        if self.p.gamma == 0.0:
            return self._linear(psi)
        half = 0.5 * self.dt
        psi = self.potential_substep(psi, half)
        psi = psi.with_values(self._linear.kinetic(psi.values))
        return self.potential_substep(psi, half)


def make_propagator(
    method: Method, V: RealField, p: PhysParams, dt: float
) -> Propagator:
    if method == "splitstep":
        return SplitStepPropagator(V, p, dt)
    if method == "crank_nicolson":
        return CrankNicolsonPropagator(V, p, dt)
    if method == "kostin":
        return KostinPropagator(V, p, dt)
    raise InvalidArgumentError(f"unknown propagator {method!r}")


def schrodinger_rate(psi: ComplexField, V: RealField, p: PhysParams) -> ComplexField:
    """dpsi/dt = -(i/hbar) H psi with the spectral kinetic operator."""
    lap = spectral_derivative(psi.grid, psi.values, 2)
    h_psi = -(p.hbar**2 / (2.0 * p.m)) * lap + V.values * psi.values
    return psi.with_values(-1j * h_psi / p.hbar)


def step_splitstep(
    psi: ComplexField, V: RealField, p: PhysParams, dt: float
) -> ComplexField:
    return SplitStepPropagator(V, p, dt)(psi)


def step_crank_nicolson(
    psi: ComplexField, V: RealField, p: PhysParams, dt: float
) -> ComplexField:
    return CrankNicolsonPropagator(V, p, dt)(psi)


def step_kostin(
    psi: ComplexField, V: RealField, p: PhysParams, dt: float
) -> ComplexField:
    return KostinPropagator(V, p, dt)(psi)


class WaveDiagnostics(BaseModel):
    """Per-snapshot observables of a wave-function run."""

    t: float
    norm: float
    mean_x: float
    variance: float
    mean_p: float
    energy: float


def wave_diagnostics(
    psi: ComplexField, V: RealField, p: PhysParams, t: float
) -> WaveDiagnostics:
    norm, mean, variance = density_moments(psi.density())
    return WaveDiagnostics(
        t=t,
        norm=norm,
        mean_x=mean,
        variance=variance,
        mean_p=wave_momentum(psi, p),
        energy=wave_energy(psi, V, p),
    )


@dataclass(frozen=True, eq=False)
class WaveTrajectory:
    times: FloatArray
    psis: tuple[ComplexField, ...]
    diagnostics: tuple[WaveDiagnostics, ...]

    @property
    def grid(self) -> Grid1D:
        return self.psis[0].grid

    def series(self, name: str) -> FloatArray:
        return np.array([getattr(row, name) for row in self.diagnostics], dtype=float)


def run_wave(
    psi0: ComplexField,
    V: RealField,
    p: PhysParams,
    t_end: float,
    dt: float,
    sample_every: int = 1,
    method: Method = "splitstep",
) -> WaveTrajectory:
    # local import keeps hydro -> oracle free of cycles
    from .hydro import step_count

    if sample_every < 1:
        raise InvalidArgumentError("sample_every must be >= 1")
    steps, dt = step_count(t_end, dt)
    propagate = make_propagator(method, V, p, dt)
    logger.info("Wave run (%s): %d steps of dt=%.3e", method, steps, dt)
    psi = psi0
    times = [0.0]
    psis = [psi]
    rows = [wave_diagnostics(psi, V, p, 0.0)]
    for i in range(1, steps + 1):
        psi = propagate(psi)
        if i % sample_every == 0 or i == steps:
            t = i * dt
            times.append(t)
            psis.append(psi)
            rows.append(wave_diagnostics(psi, V, p, t))
    return WaveTrajectory(np.array(times), tuple(psis), tuple(rows))


def ehrenfest_residual(
    traj: WaveTrajectory, V: RealField, p: PhysParams, dV: RealField | None = None
) -> float:
    """max |d<P>/dt + (gamma/m)<P> + <V'>| over interior samples, normalized.

    The scale is max(max|<P>|, hbar/L) * (gamma/m + omega0); hbar/L is the
    smallest momentum the grid resolves, which keeps stationary states at ~0.
    """
    if len(traj.times) < 3:
        raise TooFewSamplesError("ehrenfest_residual needs at least 3 samples")
    gradient = derivative(V, 1) if dV is None else dV
    momentum = traj.series("mean_p")
    force = np.array(
        [
            np.sum(np.abs(psi.values) ** 2 * gradient.values) * psi.grid.dx
            for psi in traj.psis
        ]
    )
    rate = np.gradient(momentum, traj.times)
    balance = rate + (p.gamma / p.m) * momentum + force
    scale = max(float(np.max(np.abs(momentum))), p.hbar / traj.grid.length)
    scale *= p.gamma / p.m + p.omega0
    return float(np.max(np.abs(balance[1:-1]))) / scale
