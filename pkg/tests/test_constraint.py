"""Tests for the constraint functional, its minimizer and the minimality certificate."""

import numpy as np
import pytest

from qgauss.constraint import (
    AccelerationField,
    ForceModel,
    SurfaceForceModel,
    band_limited_perturbations,
    evaluate_Z,
    evaluate_Z_tangent,
    functional_gradient,
    material_derivative,
    minimize_Z,
    minimize_Z_tangent,
    residual_field,
    verify_minimum,
)
from qgauss.errors import ConstraintViolationError, InvalidArgumentError
from qgauss.fields import RealField, integrate, make_grid
from qgauss.madelung import HydroState, PhysParams, to_hydro
from qgauss.states import (
    canonical_states,
    gaussian_packet,
    harmonic_force,
    harmonic_ground_state,
    plane_wave,
)
from qgauss.surface.sphere import (
    SurfaceHydroState,
    make_sphere_grid,
    sphere_to_hydro,
    superposition,
)


def _grid(n=256):
    return make_grid(n, -20.0, 40.0)


def _resting_normal(grid):
    return to_hydro(gaussian_packet(grid, 1.0), PhysParams())


def _uniform_state(grid, v):
    rho = RealField(grid, np.full(grid.n, 1.0 / grid.length))
    return HydroState(rho, RealField(grid, v))


def _zero(grid):
    return AccelerationField(grid, np.zeros(grid.n))


def test_material_derivative_of_uniform_flow():
    grid = make_grid(64, 0.0, 1.0)
    state = _uniform_state(grid, np.full(64, 2.0))
    assert material_derivative(state, _zero(grid)).sup() < 1e-12


def test_material_derivative_of_sine_flow():
    grid = make_grid(64, 0.0, 3.0)
    kx = 2.0 * np.pi / grid.length
    state = _uniform_state(grid, np.sin(kx * grid.x))
    a = AccelerationField(grid, np.ones(64))
    result = material_derivative(state, a).values
    expected = 1.0 + np.sin(kx * grid.x) * kx * np.cos(kx * grid.x)
    assert np.max(np.abs(result - expected)) < 1e-12


def test_Z_of_resting_normal_packet():
    grid = _grid()
    state = _resting_normal(grid)
    z = evaluate_Z(_zero(grid), state, ForceModel.free(grid), PhysParams())
    assert z == pytest.approx(1.0 / 16.0, rel=1e-6)


def test_Z_vanishes_at_minimizer_and_grows_with_shift():
    grid = _grid()
    p = PhysParams()
    f = ForceModel.free(grid)
    state = to_hydro(gaussian_packet(grid, 1.0, k0=0.5), p)
    best = minimize_Z(state, f, p)
    assert evaluate_Z(best, state, f, p) < 1e-18
    shifted = AccelerationField(grid, best.values + 0.3)
    assert evaluate_Z(shifted, state, f, p) == pytest.approx(0.09, rel=1e-9)


def test_minimizer_of_resting_normal_packet():
    grid = _grid()
    best = minimize_Z(_resting_normal(grid), ForceModel.free(grid), PhysParams())
    inner = np.abs(grid.x) < 3.0
    assert np.max(np.abs(best.values - grid.x / 4.0)[inner]) < 1e-6


def test_minimizer_of_harmonic_ground_state_is_zero():
    grid = _grid()
    p = PhysParams()
    state = to_hydro(harmonic_ground_state(grid, p), p)
    best = minimize_Z(state, harmonic_force(grid, p), p)
    inner = np.abs(grid.x) < 3.0
    assert np.max(np.abs(best.values)[inner]) < 1e-6


def test_minimizer_of_plane_wave_is_zero():
    grid = make_grid(64, 0.0, 2.0 * np.pi)
    p = PhysParams()
    best = minimize_Z(to_hydro(plane_wave(grid, 3.0), p), ForceModel.free(grid), p)
    assert best.sup() < 1e-10


def test_friction_enters_minimizer():
    grid = make_grid(64, 0.0, 1.0)
    state = _uniform_state(grid, np.full(64, 0.5))
    p = PhysParams(m=2.0)
    zero = RealField(grid, np.zeros(64))
    f = ForceModel(V=zero, gamma=0.4, dV=zero)
    best = minimize_Z(state, f, p)
    assert np.allclose(best.values, -0.4 * 0.5 / 2.0, atol=1e-12)


def test_classical_functional_moves_uniformly():
    grid = make_grid(64, 0.0, 1.0)
    p = PhysParams(hbar=0.0, classical_limit=True)
    f = ForceModel.free(grid, include_quantum=False)
    assert minimize_Z(_uniform_state(grid, np.full(64, 1.5)), f, p).sup() < 1e-12
    kx = 2.0 * np.pi
    v = 0.2 * np.sin(kx * grid.x)
    best = minimize_Z(_uniform_state(grid, v), f, p)
    expected = -v * 0.2 * kx * np.cos(kx * grid.x)
    assert np.max(np.abs(best.values - expected)) < 1e-12


def test_negative_gamma_rejected():
    grid = make_grid(16, 0.0, 1.0)
    with pytest.raises(InvalidArgumentError):
        ForceModel(V=RealField(grid, np.zeros(16)), gamma=-1.0)


def test_Z_is_exactly_quadratic():
    grid = _grid()
    p = PhysParams()
    f = ForceModel.free(grid)
    state = _resting_normal(grid)
    a = _zero(grid)
    delta = band_limited_perturbations(grid, 1, seed=3)[0]
    eps = 0.05
    r = residual_field(a, state, f, p)
    rho = state.rho.values
    expected = (
        evaluate_Z(a, state, f, p)
        + 2.0 * eps * integrate(state.rho.with_values(rho * r.values * delta.values))
        + eps**2 * integrate(state.rho.with_values(rho * delta.values**2))
    )
    moved = AccelerationField(grid, eps * delta.values)
    assert evaluate_Z(moved, state, f, p) == pytest.approx(expected, rel=1e-10)


def test_functional_gradient_matches_finite_difference():
    grid = _grid()
    p = PhysParams()
    f = ForceModel.free(grid)
    state = _resting_normal(grid)
    a = _zero(grid)
    j = 140
    h = 1e-3
    bump = np.zeros(grid.n)
    bump[j] = h
    up = evaluate_Z(AccelerationField(grid, bump), state, f, p)
    down = evaluate_Z(AccelerationField(grid, -bump), state, f, p)
    gradient = functional_gradient(a, state, f, p).values[j]
    assert gradient == pytest.approx((up - down) / (2.0 * h), rel=1e-6)


def test_perturbations_are_seeded_and_normalized():
    grid = make_grid(64, 0.0, 1.0)
    first = band_limited_perturbations(grid, 5, seed=11)
    second = band_limited_perturbations(grid, 5, seed=11)
    assert len(first) == 5
    for a, b in zip(first, second):
        assert np.array_equal(a.values, b.values)
        assert a.sup() == pytest.approx(1.0)
    spectrum = np.fft.rfft(first[0].values)
    assert np.max(np.abs(spectrum[64 // 4 + 1 :])) < 1e-12


@pytest.mark.parametrize(
    "name",
    ["free_gaussian", "boosted_gaussian", "harmonic_ground", "coherent", "two_bump"],
)
def test_certificate_on_canonical_states(name):
    grid = _grid()
    p = PhysParams()
    psi, force = canonical_states(grid, p)[name]
    certificate = verify_minimum(to_hydro(psi, p), force, p, trials=20, seed=1)
    assert certificate.passed
    assert certificate.negative_margins == 0
    assert certificate.worst_margin > 0.0
    assert certificate.worst_quadratic_error < 1e-8
    assert certificate.z_at_minimizer < 1e-16


def test_certificate_with_zero_epsilon():
    grid = _grid()
    p = PhysParams()
    state = _resting_normal(grid)
    certificate = verify_minimum(
        state, ForceModel.free(grid), p, trials=3, epsilon=0.0
    )
    assert certificate.worst_margin == 0.0
    assert certificate.passed


def test_off_support_directions_are_flat():
    grid = _grid()
    p = PhysParams()
    state = _resting_normal(grid)
    delta = AccelerationField(grid, np.where(np.abs(grid.x) > 15.0, 1.0, 0.0))
    eps = 1e-3
    certificate = verify_minimum(
        state, ForceModel.free(grid), p, epsilon=eps, perturbations=[delta]
    )
    floor = 1e-12 * float(np.max(state.rho.values))
    bound = eps**2 * floor * float(np.sum(delta.values**2) * grid.dx)
    assert certificate.worst_margin <= bound


def test_certificate_needs_trials():
    grid = _grid(64)
    with pytest.raises(InvalidArgumentError):
        verify_minimum(
            _resting_normal(grid), ForceModel.free(grid), PhysParams(), trials=0
        )


def _sphere_rest_state(lmax=24):
    grid = make_sphere_grid(lmax)
    state = superposition([(0, 0, 1.0), (1, 0, 0.2)], lmax=lmax)
    return grid, sphere_to_hydro(state, grid, PhysParams())


def test_tangential_minimizer_of_uniform_density():
    grid = make_sphere_grid(6)
    state = sphere_to_hydro(superposition([(0, 0, 1.0)], lmax=6), grid, PhysParams())
    result = minimize_Z_tangent(state, PhysParams())
    assert np.max(np.abs(result.a_theta)) < 1e-10
    assert np.max(np.abs(result.a_phi)) < 1e-10
    assert result.residual < 1e-20
    pressed = minimize_Z_tangent(
        state, PhysParams(), SurfaceForceModel(normal_acceleration=-2.0)
    )
    assert pressed.residual == pytest.approx(4.0, rel=1e-10)


def test_tangential_minimizer_is_quantum_force():
    grid, state = _sphere_rest_state()
    result = minimize_Z_tangent(state, PhysParams())
    theta, _ = grid.mesh
    # rest state c0 Y00 + c1 Y10 has Q = B cos / (A + B cos)
    A = 1.0 / (2.0 * np.sqrt(np.pi))
    B = 0.2 * np.sqrt(3.0 / (4.0 * np.pi))
    expected = A * B * np.sin(theta) / (A + B * np.cos(theta)) ** 2
    assert np.max(np.abs(result.a_theta - expected)) < 1e-7
    assert np.max(np.abs(result.a_phi)) < 1e-7


def test_tangential_functional_at_minimizer_equals_residual():
    grid, state = _sphere_rest_state(lmax=12)
    p = PhysParams()
    force = SurfaceForceModel(normal_acceleration=-1.0)
    result = minimize_Z_tangent(state, p, force)
    at_min = evaluate_Z_tangent(result.a_theta, result.a_phi, state, p, force)
    assert at_min == pytest.approx(result.residual, rel=1e-12)
    bumped = evaluate_Z_tangent(result.a_theta + 0.1, result.a_phi, state, p, force)
    assert bumped > at_min


def test_tangential_functional_rejects_normal_velocity():
    grid, state = _sphere_rest_state(lmax=4)
    moving = SurfaceHydroState(
        grid=grid,
        radius=state.radius,
        rho=state.rho,
        v_theta=state.v_theta,
        v_phi=state.v_phi,
        v_normal=np.full(state.rho.shape, 0.1),
    )
    with pytest.raises(ConstraintViolationError):
        minimize_Z_tangent(moving, PhysParams())
