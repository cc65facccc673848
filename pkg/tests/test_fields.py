"""Tests for the periodic grid, field containers and spectral derivatives."""

import numpy as np
import pytest

from qgauss.errors import GridMismatchError, InvalidArgumentError, NonFiniteFieldError
from qgauss.fields import (
    ComplexField,
    RealField,
    derivative,
    integrate,
    make_grid,
    periodic_antiderivative,
    real_derivative,
    require_same_grid,
    spectral_filter,
)


def _sine_field(n=64, k=3):
    grid = make_grid(n, 0.0, 2.0 * np.pi)
    return RealField(grid, np.sin(k * grid.x))


def test_grid_spacing_and_points():
    grid = make_grid(16, -1.0, 4.0)
    assert grid.dx == pytest.approx(0.25)
    assert grid.x[0] == -1.0
    assert grid.x[-1] == pytest.approx(2.75)
    assert len(grid.k) == 16


def test_grid_rejects_too_few_points():
    with pytest.raises(InvalidArgumentError):
        make_grid(4, 0.0, 1.0)


def test_grid_rejects_non_positive_length():
    with pytest.raises(InvalidArgumentError):
        make_grid(16, 0.0, 0.0)


def test_field_rejects_wrong_shape():
    grid = make_grid(16, 0.0, 1.0)
    with pytest.raises(InvalidArgumentError):
        RealField(grid, np.zeros(8))


def test_field_rejects_nan():
    grid = make_grid(16, 0.0, 1.0)
    values = np.zeros(16)
    values[3] = np.nan
    with pytest.raises(NonFiniteFieldError):
        RealField(grid, values)


def test_field_values_are_read_only_copies():
    grid = make_grid(16, 0.0, 1.0)
    source = np.ones(16)
    field = RealField(grid, source)
    source[0] = 5.0
    assert field.values[0] == 1.0
    with pytest.raises(ValueError):
        field.values[0] = 2.0


def test_first_derivative_of_sine_is_exact():
    f = _sine_field()
    df = derivative(f, 1)
    assert np.max(np.abs(df.values - 3.0 * np.cos(3.0 * f.grid.x))) < 1e-12


def test_second_derivative_of_sine_is_exact():
    f = _sine_field()
    d2f = derivative(f, 2)
    assert np.max(np.abs(d2f.values + 9.0 * f.values)) < 1e-11


def test_derivative_keeps_field_kind():
    grid = make_grid(32, 0.0, 2.0 * np.pi)
    psi = ComplexField(grid, np.exp(2j * grid.x))
    dpsi = derivative(psi, 1)
    assert isinstance(dpsi, ComplexField)
    assert np.max(np.abs(dpsi.values - 2j * psi.values)) < 1e-12


def test_derivative_of_constant_is_zero():
    grid = make_grid(32, 0.0, 1.0)
    f = RealField(grid, np.full(32, 7.0))
    assert derivative(f, 1).sup() < 1e-12
    assert derivative(f, 2).sup() < 1e-10


def test_nyquist_mode_has_no_first_derivative():
    grid = make_grid(16, 0.0, 1.0)
    f = RealField(grid, (-1.0) ** np.arange(16))
    assert derivative(f, 1).sup() < 1e-12


def test_invalid_derivative_order():
    with pytest.raises(InvalidArgumentError):
        derivative(_sine_field(), 3)


def test_integrate_periodic_function():
    grid = make_grid(64, 0.0, 2.0 * np.pi)
    f = RealField(grid, 1.0 + np.cos(grid.x) ** 2)
    assert integrate(f) == pytest.approx(3.0 * np.pi, rel=1e-12)


def test_require_same_grid():
    a = make_grid(16, 0.0, 1.0)
    b = make_grid(16, 0.0, 2.0)
    f = RealField(a, np.zeros(16))
    g = RealField(b, np.zeros(16))
    assert require_same_grid(f, RealField(a, np.ones(16))) == a
    with pytest.raises(GridMismatchError):
        require_same_grid(f, g)


def test_complex_field_density_and_norm():
    grid = make_grid(64, 0.0, 2.0)
    psi = ComplexField(grid, np.full(64, 1.0 / np.sqrt(2.0), dtype=complex))
    assert psi.norm() == pytest.approx(1.0)
    assert np.allclose(psi.density().values, 0.5)


def test_parseval_identity():
    grid = make_grid(128, -5.0, 10.0)
    values = np.exp(-grid.x**2) * (1.0 + 0.3 * np.sin(2.0 * grid.x))
    spectrum = np.fft.fft(values)
    energy = float(np.sum(np.abs(spectrum) ** 2)) * grid.dx / grid.n
    assert integrate(RealField(grid, values**2)) == pytest.approx(energy, rel=1e-12)


def test_derivative_integrates_to_zero():
    grid = make_grid(96, 0.0, 5.0)
    f = RealField(grid, np.exp(np.cos(2.0 * np.pi * grid.x / grid.length)))
    assert abs(integrate(derivative(f))) < 1e-12


def test_repeated_first_derivative_matches_second():
    grid = make_grid(64, 0.0, 2.0 * np.pi)
    x = grid.x
    f = RealField(grid, np.sin(3 * x) + 0.5 * np.cos(7 * x) + 0.2 * np.sin(20 * x))
    twice = derivative(derivative(f)).values
    direct = derivative(f, 2).values
    assert np.max(np.abs(twice - direct)) < 1e-10 * np.max(np.abs(direct))


def test_second_derivative_of_gaussian():
    grid = make_grid(256, -10.0, 20.0)
    x = grid.x
    out = real_derivative(grid, np.exp(-(x**2)), 2)
    assert np.max(np.abs(out - (4.0 * x**2 - 2.0) * np.exp(-(x**2)))) < 1e-8


def test_periodic_antiderivative_of_cosine():
    grid = make_grid(64, 0.0, 2.0 * np.pi)
    out = periodic_antiderivative(grid, np.cos(2 * grid.x))
    assert np.max(np.abs(out - 0.5 * np.sin(2 * grid.x))) < 1e-12


def test_periodic_antiderivative_rejects_nonzero_mean():
    grid = make_grid(64, 0.0, 2.0 * np.pi)
    with pytest.raises(InvalidArgumentError, match="non-zero mean"):
        periodic_antiderivative(grid, 1.0 + np.cos(grid.x))


def test_spectral_filter_removes_only_the_top_of_the_band():
    grid = make_grid(64, 0.0, 2.0 * np.pi)
    smooth = np.sin(grid.x)
    assert np.max(np.abs(spectral_filter(grid, smooth, 36.0, 36) - smooth)) < 1e-14
    nyquist = np.cos(np.pi * np.arange(64))
    assert np.max(np.abs(spectral_filter(grid, nyquist, 36.0, 36))) < 1e-12
    untouched = spectral_filter(grid, nyquist, 0.0, 36)
    assert np.array_equal(untouched, nyquist)
    assert untouched is not nyquist
