"""Uniform periodic grids, spectral derivatives and field containers."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Self

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import GridMismatchError, InvalidArgumentError, NonFiniteFieldError

logger = logging.getLogger(__name__)

FloatArray = NDArray[np.float64]
ComplexArray = NDArray[np.complex128]

MIN_POINTS = 8
# relative size of the discarded imaginary part before we complain
REAL_ASYMMETRY_TOL = 1e-12


@dataclass(frozen=True)
class Grid1D:
    """Uniform periodic grid x_j = x0 + j*dx, j = 0..n-1."""

    n: int
    x0: float
    length: float

    def __post_init__(self) -> None:
        if self.n < MIN_POINTS:
            raise InvalidArgumentError(f"grid needs n >= {MIN_POINTS}, got {self.n}")
        if not self.length > 0.0 or not np.isfinite(self.length):
            raise InvalidArgumentError(f"grid length must be positive: {self.length}")
        if not np.isfinite(self.x0):
            raise InvalidArgumentError(f"grid origin must be finite: {self.x0}")

    @cached_property
    def dx(self) -> float:
        return self.length / self.n

    @cached_property
    def x(self) -> FloatArray:
        x = self.x0 + np.arange(self.n) * self.dx
        x.flags.writeable = False
        return x

    @cached_property
    def k(self) -> FloatArray:
        """Angular wavenumbers in FFT order, Nyquist mode negative."""
        k = 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.dx)
        k.flags.writeable = False
        return k

    @cached_property
    def _first_derivative_symbol(self) -> ComplexArray:
        symbol = 1j * self.k
        if self.n % 2 == 0:
            # the Nyquist mode has no odd derivative on the grid
            symbol[self.n // 2] = 0.0
        return symbol

    @cached_property
    def _second_derivative_symbol(self) -> FloatArray:
        return -(self.k**2)


def make_grid(n: int, x0: float, length: float) -> Grid1D:
    """Build a periodic grid; raises InvalidArgumentError for n < 8 or length <= 0."""
    return Grid1D(n=int(n), x0=float(x0), length=float(length))


def _frozen(values: np.ndarray) -> np.ndarray:
    values.flags.writeable = False
    return values


@dataclass(frozen=True, eq=False)
class RealField:
    """Real samples on a grid. Values are copied and made read-only."""

    grid: Grid1D
    values: FloatArray

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=np.float64)
        if values.shape != (self.grid.n,):
            raise InvalidArgumentError(
                f"expected {self.grid.n} samples, got shape {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise NonFiniteFieldError(f"{type(self).__name__} has non-finite samples")
        object.__setattr__(self, "values", _frozen(values))

    def with_values(self, values: ArrayLike) -> Self:
        return type(self)(self.grid, np.asarray(values))

    def sup(self) -> float:
        return float(np.max(np.abs(self.values)))


@dataclass(frozen=True, eq=False)
class ComplexField:
    """Complex samples on a grid (wave functions)."""

    grid: Grid1D
    values: ComplexArray

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=np.complex128)
        if values.shape != (self.grid.n,):
            raise InvalidArgumentError(
                f"expected {self.grid.n} samples, got shape {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise NonFiniteFieldError("ComplexField has non-finite samples")
        object.__setattr__(self, "values", _frozen(values))

    def with_values(self, values: ArrayLike) -> Self:
        return type(self)(self.grid, np.asarray(values))

    def density(self) -> RealField:
        return RealField(self.grid, np.abs(self.values) ** 2)

    def norm(self) -> float:
        return float(np.sum(np.abs(self.values) ** 2) * self.grid.dx)


def require_same_grid(*fields: RealField | ComplexField) -> Grid1D:
    """Return the common grid or raise GridMismatchError."""
    grid = fields[0].grid
    for other in fields[1:]:
        if other.grid != grid:
            raise GridMismatchError(f"grid mismatch: {grid} vs {other.grid}")
    return grid


def spectral_derivative(
    grid: Grid1D, values: np.ndarray, order: int = 1
) -> np.ndarray:
    """Spectral derivative of raw samples; complex in, complex out."""
    if order == 1:
        symbol: np.ndarray = grid._first_derivative_symbol
    elif order == 2:
        symbol = grid._second_derivative_symbol
    else:
        raise InvalidArgumentError(f"derivative order must be 1 or 2, got {order}")
    return np.fft.ifft(symbol * np.fft.fft(values))


def real_derivative(grid: Grid1D, values: np.ndarray, order: int = 1) -> FloatArray:
    """Spectral derivative of real samples with the imaginary part discarded."""
    out = spectral_derivative(grid, values, order)
    scale = float(np.max(np.abs(out))) if out.size else 0.0
    if scale > 0.0 and np.max(np.abs(out.imag)) > REAL_ASYMMETRY_TOL * scale:
        logger.debug(
            "Discarding imaginary part %.3e of a real derivative",
            float(np.max(np.abs(out.imag))),
        )
    return np.ascontiguousarray(out.real)


def derivative[F: (RealField, ComplexField)](f: F, order: int = 1) -> F:
    """Spectral derivative of a periodic field, exact for band-limited input."""
    if isinstance(f, RealField):
        return f.with_values(real_derivative(f.grid, f.values, order))
    return f.with_values(spectral_derivative(f.grid, f.values, order))


def integrate(f: RealField) -> float:
    """Rectangle rule sum(f)*dx, the trapezoid rule on a periodic grid."""
    return float(np.sum(f.values) * f.grid.dx)


def periodic_antiderivative(grid: Grid1D, values: np.ndarray) -> FloatArray:
    """Zero-mean periodic F with F' = values; the samples must have zero mean."""
    mean = float(np.mean(values))
    scale = max(float(np.max(np.abs(values))), 1.0)
    if abs(mean) > REAL_ASYMMETRY_TOL * scale:
        raise InvalidArgumentError(f"samples have non-zero mean {mean:.3e}")
    symbol = grid._first_derivative_symbol
    spectrum = np.fft.fft(values)
    out = np.zeros_like(spectrum)
    nonzero = symbol != 0.0
    out[nonzero] = spectrum[nonzero] / symbol[nonzero]
    return np.ascontiguousarray(np.fft.ifft(out).real)


def spectral_filter(
    grid: Grid1D, values: np.ndarray, strength: float, order: int
) -> FloatArray:
    """Exponential low-pass exp(-strength (|k|/k_max)^order) of real samples."""
    if strength == 0.0:
        return np.array(values, dtype=np.float64)
    k_max = np.pi / grid.dx
    mask = np.exp(-strength * (np.abs(grid.k) / k_max) ** order)
    return np.ascontiguousarray(np.fft.ifft(mask * np.fft.fft(values)).real)
