"""Tests for the hydrodynamic solver."""

import numpy as np
import pytest

from qgauss.constraint import ForceModel, minimize_Z
from qgauss.errors import InvalidArgumentError, StabilityViolationError
from qgauss.fields import RealField, make_grid, real_derivative
from qgauss.hydro import (
    continuation_profile,
    hydro_rhs,
    regularize_velocity,
    run_hydro,
    stability_limit,
    step_count,
    step_hydro,
)
from qgauss.madelung import HydroState, PhysParams, support_weight, to_hydro
from qgauss.observables import classical_trajectory, free_variance
from qgauss.oracle import run_wave
from qgauss.states import (
    coherent_state,
    gaussian_packet,
    harmonic_force,
    harmonic_ground_state,
)


def _grid(n=256):
    return make_grid(n, -20.0, 40.0)


def _classical_packet(grid, v):
    rho = gaussian_packet(grid, 1.0).density()
    return HydroState(rho, RealField(grid, np.full(grid.n, v)))


def test_stability_limit():
    grid = _grid(128)
    assert stability_limit(grid, PhysParams(hbar=2.0, m=3.0)) == pytest.approx(
        0.1 * 3.0 * grid.dx**2 / 2.0
    )
    assert stability_limit(grid, PhysParams(hbar=0.0, classical_limit=True)) == np.inf


def test_step_count_lands_on_end():
    assert step_count(1.0, 0.3) == (4, 0.25)
    steps, dt = step_count(1.0, 0.25)
    assert steps == 4
    assert dt == 0.25
    with pytest.raises(InvalidArgumentError):
        step_count(0.0, 0.1)


def test_step_above_stability_bound_raises():
    grid = _grid()
    p = PhysParams()
    state = to_hydro(gaussian_packet(grid, 1.0), p)
    with pytest.raises(StabilityViolationError):
        step_hydro(state, ForceModel.free(grid), p, 2.0 * stability_limit(grid, p))


def test_rhs_of_resting_normal_packet():
    grid = _grid()
    p = PhysParams()
    state = to_hydro(gaussian_packet(grid, 1.0), p)
    drho, dv = hydro_rhs(state, ForceModel.free(grid), p)
    assert drho.sup() < 1e-10
    inner = np.abs(grid.x) < 3.0
    assert np.max(np.abs(dv.values - grid.x / 4.0)[inner]) < 1e-6


def test_rhs_matches_minimizer_on_support():
    grid = _grid()
    p = PhysParams()
    state = to_hydro(gaussian_packet(grid, 1.0, k0=0.7), p)
    f = ForceModel.free(grid)
    _, dv = hydro_rhs(state, f, p)
    inner = np.abs(grid.x) < 4.0
    reference = minimize_Z(state, f, p).values
    assert np.max(np.abs(dv.values - reference)[inner]) < 1e-8


def test_ground_state_is_stationary():
    grid = _grid()
    p = PhysParams()
    state = to_hydro(harmonic_ground_state(grid, p), p)
    f = harmonic_force(grid, p)
    drho, dv = hydro_rhs(state, f, p)
    assert drho.sup() < 1e-7
    inner = np.abs(grid.x) < 3.0
    assert np.max(np.abs(dv.values)[inner]) < 1e-6
    after = step_hydro(state, f, p, stability_limit(grid, p))
    assert np.max(np.abs(after.rho.values - state.rho.values)) < 1e-6


def test_free_packet_spreads():
    grid = _grid()
    p = PhysParams()
    traj = run_hydro(
        to_hydro(gaussian_packet(grid, 1.0), p),
        ForceModel.free(grid),
        p,
        t_end=0.5,
        dt=stability_limit(grid, p),
        sample_every=50,
    )
    variance = traj.series("variance")
    analytic = free_variance(1.0, traj.times, p)
    assert np.max(np.abs(variance - analytic) / analytic) < 1e-3
    assert np.max(np.abs(traj.series("norm") - 1.0)) < 1e-8
    assert np.max(np.abs(traj.series("mean_p"))) < 1e-8
    assert np.all(np.diff(traj.times) > 0.0)
    assert traj.times[-1] == pytest.approx(0.5)
    assert traj.diagnostics[-1].irrotationality < 1e-5


def test_classical_fluid_keeps_its_shape():
    grid = _grid()
    p = PhysParams(hbar=0.0, classical_limit=True)
    f = ForceModel.free(grid, include_quantum=False)
    traj = run_hydro(_classical_packet(grid, 0.0), f, p, t_end=0.2, dt=0.01)
    variance = traj.series("variance")
    assert np.max(np.abs(variance - 1.0)) < 1e-12
    assert np.max(np.abs(traj.states[-1].v.values)) < 1e-14


def test_friction_damps_uniform_flow():
    grid = _grid()
    p = PhysParams(hbar=0.0, classical_limit=True)
    zero = RealField(grid, np.zeros(grid.n))
    f = ForceModel(V=zero, gamma=0.5, include_quantum=False, dV=zero)
    traj = run_hydro(_classical_packet(grid, 1.0), f, p, t_end=1.0, dt=0.01)
    kinetic = traj.series("kinetic")
    assert np.all(np.diff(kinetic) <= 1e-10)
    assert kinetic[-1] == pytest.approx(np.exp(-1.0), rel=1e-8)
    drift = (1.0 - np.exp(-0.5)) / 0.5
    assert traj.series("mean_x")[-1] == pytest.approx(drift, abs=1e-8)


def test_sampling_keeps_last_step():
    grid = _grid(64)
    p = PhysParams(hbar=0.0, classical_limit=True)
    f = ForceModel.free(grid, include_quantum=False)
    traj = run_hydro(_classical_packet(grid, 0.0), f, p, 0.1, 0.01, sample_every=3)
    assert len(traj.times) == 5
    assert traj.times[-1] == pytest.approx(0.1)
    with pytest.raises(InvalidArgumentError):
        run_hydro(_classical_packet(grid, 0.0), f, p, 0.1, 0.01, sample_every=0)


def test_continuation_profile_has_unit_slope_on_support():
    grid = _grid()
    rho = gaussian_packet(grid, 1.0, x0=3.0).density().values
    profile = continuation_profile(grid, rho)
    slope = real_derivative(grid, profile, 1)
    inner = np.abs(grid.x - 3.0) < 6.0
    assert np.max(np.abs(slope[inner] - 1.0)) < 1e-10
    assert np.max(np.abs(np.diff(profile[inner]) / grid.dx - 1.0)) < 1e-10
    # the profile turns back opposite the packet
    assert abs(grid.x[np.argmin(slope)] + 17.0) < 0.5


def test_regularized_velocity_keeps_support_and_continues_flow():
    grid = _grid()
    p = PhysParams()
    state = to_hydro(gaussian_packet(grid, 1.0, k0=0.7), p)
    smooth = regularize_velocity(state)
    support = support_weight(state.rho.values) == 1.0
    assert np.max(np.abs(smooth.v.values - state.v.values)[support]) < 1e-14
    assert np.max(np.abs(smooth.v.values - 0.7)) < 1e-7
    assert smooth.rho is state.rho
    assert smooth.s is state.s


def test_free_packet_reaches_t5_at_the_stability_limit():
    grid = make_grid(512, -40.0, 80.0)
    p = PhysParams()
    traj = run_hydro(
        to_hydro(gaussian_packet(grid, 1.0), p),
        ForceModel.free(grid),
        p,
        t_end=5.0,
        dt=stability_limit(grid, p),
        sample_every=256,
    )
    assert traj.times[-1] == pytest.approx(5.0)
    variance = traj.series("variance")
    analytic = free_variance(1.0, traj.times, p)
    assert np.max(np.abs(variance - analytic) / analytic) < 1e-3
    assert np.max(np.abs(traj.series("norm") - 1.0)) < 1e-8
    assert np.max(traj.series("irrotationality")) < 1e-6


def test_harmonic_packet_reaches_t5_at_the_stability_limit():
    grid = _grid()
    p = PhysParams()
    f = harmonic_force(grid, p)
    traj = run_hydro(
        to_hydro(coherent_state(grid, p, x0=1.0), p),
        f,
        p,
        t_end=5.0,
        dt=stability_limit(grid, p),
        sample_every=256,
    )
    assert traj.times[-1] == pytest.approx(5.0)
    energy = traj.series("energy")
    assert energy[0] == pytest.approx(1.0, rel=1e-8)
    assert np.max(np.abs(energy - energy[0])) / energy[0] < 1e-5
    assert np.max(np.abs(traj.series("mean_x") - np.cos(traj.times))) < 1e-4
    assert np.max(np.abs(traj.series("norm") - 1.0)) < 1e-8


@pytest.mark.slow
def test_damped_coherent_packet_follows_classical_oscillator():
    grid = _grid()
    p = PhysParams(gamma=0.2)
    f = harmonic_force(grid, p)
    traj = run_hydro(
        to_hydro(coherent_state(grid, p, x0=2.0), p),
        f,
        p,
        t_end=4.0 * np.pi,
        dt=stability_limit(grid, p),
        sample_every=128,
    )
    classical, _ = classical_trajectory(2.0, 0.0, traj.times, p)
    assert np.max(np.abs(traj.series("mean_x") - classical)) < 1e-3
    assert np.max(traj.series("irrotationality")) < 1e-6


def test_damped_free_flow_dissipates_and_stays_irrotational():
    grid = _grid()
    p = PhysParams(gamma=0.5)
    zero = RealField(grid, np.zeros(grid.n))
    f = ForceModel(V=zero, gamma=p.gamma, dV=zero)
    traj = run_hydro(
        to_hydro(gaussian_packet(grid, 1.5, k0=1.5), p),
        f,
        p,
        t_end=2.0,
        dt=stability_limit(grid, p),
        sample_every=64,
    )
    kinetic = traj.series("kinetic")
    assert np.all(np.diff(kinetic) <= 1e-10)
    assert kinetic[-1] < 0.5 * kinetic[0]
    assert np.max(traj.series("irrotationality")) < 1e-6


def test_error_against_wave_oracle_shrinks_under_refinement():
    p = PhysParams()
    gaps = []
    for n in (64, 128):
        grid = make_grid(n, -20.0, 40.0)
        psi = gaussian_packet(grid, 1.0, k0=0.5)
        dt = stability_limit(grid, p)
        hydro = run_hydro(to_hydro(psi, p), ForceModel.free(grid), p, 1.0, dt, 10**6)
        V = RealField(grid, np.zeros(n))
        wave = run_wave(psi, V, p, 1.0, dt, 10**6)
        gap = hydro.states[-1].rho.values - wave.psis[-1].density().values
        gaps.append(float(np.sqrt(np.sum(gap**2) * grid.dx)))
    assert gaps[0] < 1e-3
    assert gaps[1] < 0.5 * gaps[0]
