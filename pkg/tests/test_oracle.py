"""Tests for the wave-function oracle: split-step, Crank-Nicolson and Kostin."""

import numpy as np
import pytest

from qgauss.errors import InvalidArgumentError, LinearSolveError, TooFewSamplesError
from qgauss.fields import RealField, make_grid
from qgauss.madelung import PhysParams
from qgauss.observables import classical_trajectory
from qgauss.oracle import (
    CrankNicolsonPropagator,
    KostinPropagator,
    ehrenfest_residual,
    make_propagator,
    run_wave,
    step_crank_nicolson,
    step_kostin,
    step_splitstep,
)
from qgauss.states import (
    coherent_state,
    gaussian_packet,
    harmonic_ground_state,
    plane_wave,
    polynomial_potential,
)


def _grid(n=256):
    return make_grid(n, -20.0, 40.0)


def _harmonic(grid, p):
    return polynomial_potential(grid, [0.0, 0.0, 0.5 * p.m * p.omega0**2])


def _l2(a, b, dx):
    return float(np.sqrt(np.sum(np.abs(a - b) ** 2) * dx))


def test_splitstep_plane_wave_phase():
    grid = make_grid(64, 0.0, 2.0 * np.pi)
    p = PhysParams()
    psi = plane_wave(grid, 3.0)
    V = RealField(grid, np.zeros(64))
    dt = 0.01
    out = step_splitstep(psi, V, p, dt)
    expected = psi.values * np.exp(-1j * 9.0 * dt / 2.0)
    assert np.max(np.abs(out.values - expected)) < 1e-13


def test_splitstep_ground_state_phase():
    grid = _grid()
    p = PhysParams()
    V, _ = _harmonic(grid, p)
    psi0 = harmonic_ground_state(grid, p)
    traj = run_wave(psi0, V, p, t_end=1.0, dt=0.01, sample_every=100)
    ov = np.sum(np.conj(psi0.values) * traj.psis[-1].values) * grid.dx
    assert abs(ov) == pytest.approx(1.0, abs=1e-8)
    assert -np.angle(ov) == pytest.approx(0.5, rel=1e-5)


def test_splitstep_coherent_state_follows_cosine():
    grid = _grid()
    p = PhysParams()
    V, _ = _harmonic(grid, p)
    traj = run_wave(coherent_state(grid, p, x0=2.0), V, p, 2.0 * np.pi, 1e-3, 100)
    mean_x = traj.series("mean_x")
    assert np.max(np.abs(mean_x - 2.0 * np.cos(traj.times))) < 1e-5


@pytest.mark.parametrize("method", ["splitstep", "crank_nicolson"])
def test_linear_propagators_preserve_norm(method):
    grid = _grid()
    p = PhysParams()
    V, _ = _harmonic(grid, p)
    psi = gaussian_packet(grid, 1.0, x0=1.0, k0=0.5)
    traj = run_wave(psi, V, p, 2.0, 0.01, sample_every=50, method=method)
    assert np.max(np.abs(traj.series("norm") - 1.0)) < 1e-10


def test_crank_nicolson_keeps_constant_state():
    grid = make_grid(32, 0.0, 1.0)
    values = np.full(32, 1.0 + 0.0j)
    psi = plane_wave(grid, 0.0)
    V = RealField(grid, np.zeros(32))
    out = step_crank_nicolson(psi, V, PhysParams(), 0.1)
    assert np.allclose(out.values, values, atol=1e-13)


def test_crank_nicolson_agrees_with_splitstep():
    grid = make_grid(512, -20.0, 40.0)
    p = PhysParams()
    V = RealField(grid, np.zeros(grid.n))
    psi = gaussian_packet(grid, 2.0, k0=0.5)
    exact = run_wave(psi, V, p, 1.0, 0.005, sample_every=1000)
    implicit = run_wave(
        psi, V, p, 1.0, 0.005, sample_every=1000, method="crank_nicolson"
    )
    gap = _l2(exact.psis[-1].values, implicit.psis[-1].values, grid.dx)
    assert gap < 1e-4


def test_crank_nicolson_rejects_non_finite_step():
    grid = make_grid(32, 0.0, 1.0)
    with pytest.raises(LinearSolveError):
        CrankNicolsonPropagator(RealField(grid, np.zeros(32)), PhysParams(), np.inf)


@pytest.mark.parametrize("method", ["splitstep", "crank_nicolson"])
def test_second_order_in_time(method):
    grid = _grid()
    p = PhysParams()
    V, _ = polynomial_potential(grid, [0.0, 0.0, 0.05])
    psi = gaussian_packet(grid, 1.0, x0=1.0, k0=0.5)
    base = 0.02
    reference = run_wave(psi, V, p, 1.0, base / 8, 10**6, method=method)
    errors = []
    for dt in (base, base / 2):
        traj = run_wave(psi, V, p, 1.0, dt, 10**6, method=method)
        errors.append(_l2(traj.psis[-1].values, reference.psis[-1].values, grid.dx))
    assert errors[0] / errors[1] == pytest.approx(4.0, rel=0.2)


def test_kostin_without_friction_is_splitstep():
    grid = _grid()
    p = PhysParams(gamma=0.0)
    V, _ = _harmonic(grid, p)
    psi = gaussian_packet(grid, 1.0, x0=1.0, k0=0.5)
    assert np.array_equal(
        step_kostin(psi, V, p, 0.01).values, step_splitstep(psi, V, p, 0.01).values
    )


def test_kostin_substep_leaves_real_free_state_alone():
    grid = _grid()
    p = PhysParams(gamma=0.3)
    psi = gaussian_packet(grid, 1.0)
    propagator = KostinPropagator(RealField(grid, np.zeros(grid.n)), p, 0.01)
    assert np.array_equal(propagator.potential_substep(psi, 0.005).values, psi.values)


def test_kostin_is_gauge_covariant():
    grid = _grid()
    p = PhysParams(gamma=0.4)
    V, _ = _harmonic(grid, p)
    psi = gaussian_packet(grid, 1.0, x0=1.0, k0=0.5)
    rotated = psi.with_values(psi.values * np.exp(2.5j))
    a = step_kostin(psi, V, p, 0.01).values
    b = step_kostin(rotated, V, p, 0.01).values
    assert np.allclose(b, a * np.exp(2.5j), atol=1e-12)


def test_kostin_follows_damped_oscillator():
    grid = _grid()
    p = PhysParams(gamma=0.2)
    V, dV = _harmonic(grid, p)
    psi = coherent_state(grid, p, x0=2.0)
    traj = run_wave(psi, V, p, t_end=10.0, dt=0.01, method="kostin")
    assert np.max(np.abs(traj.series("norm") - 1.0)) < 1e-8
    classical, _ = classical_trajectory(2.0, 0.0, traj.times, p)
    assert np.max(np.abs(traj.series("mean_x") - classical)) < 5e-3
    assert ehrenfest_residual(traj, V, p, dV=dV) < 1e-3
    energy = traj.series("energy")
    assert energy[0] == pytest.approx(2.5, rel=1e-6)
    assert 0.5 - 1e-3 < energy[-1] < 1.0


def test_ehrenfest_for_linear_oscillator():
    grid = _grid()
    p = PhysParams()
    V, dV = _harmonic(grid, p)
    traj = run_wave(coherent_state(grid, p, x0=1.5), V, p, 2.0, 0.01)
    assert ehrenfest_residual(traj, V, p, dV=dV) < 1e-4


def test_ehrenfest_for_damped_ground_state():
    grid = _grid()
    p = PhysParams(gamma=0.5)
    V, dV = _harmonic(grid, p)
    traj = run_wave(harmonic_ground_state(grid, p), V, p, 0.5, 0.01, method="kostin")
    assert ehrenfest_residual(traj, V, p, dV=dV) < 1e-8


def test_ehrenfest_needs_three_samples():
    grid = _grid(64)
    p = PhysParams()
    V, dV = _harmonic(grid, p)
    traj = run_wave(harmonic_ground_state(grid, p), V, p, 0.1, 0.1)
    with pytest.raises(TooFewSamplesError):
        ehrenfest_residual(traj, V, p, dV=dV)


def test_unknown_method():
    grid = _grid(64)
    with pytest.raises(InvalidArgumentError):
        make_propagator("leapfrog", RealField(grid, np.zeros(64)), PhysParams(), 0.1)


@pytest.mark.slow
def test_kostin_energy_never_increases():
    grid = _grid()
    p = PhysParams(gamma=0.1)
    V, _ = _harmonic(grid, p)
    psi = coherent_state(grid, p, x0=2.0)
    traj = run_wave(psi, V, p, t_end=20.0, dt=1e-3, sample_every=10, method="kostin")
    energy = traj.series("energy")
    assert np.all(np.diff(energy) <= 1e-8)
    assert energy[-1] < energy[0]
    assert np.max(np.abs(traj.series("norm") - 1.0)) < 1e-8
