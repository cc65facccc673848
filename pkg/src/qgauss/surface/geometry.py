"""Curvature of parametric surfaces and the thin-layer geometric potential."""

from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike

from ..errors import DegenerateMetricError
from ..fields import FloatArray
from ..madelung import PhysParams

logger = logging.getLogger(__name__)

# map (u, v) -> array of shape (3, *broadcast(u, v).shape)
VectorMap = Callable[[np.ndarray, np.ndarray], np.ndarray]

FD_RELATIVE_STEP = 1e-5


@dataclass(frozen=True)
class ParametricSurface:
    """Embedding r(u, v) with optional analytic first and second derivatives.

    Missing derivatives fall back to central differences with h = 1e-5 * scale.
    """

    name: str
    embedding: VectorMap
    u_range: tuple[float, float]
    v_range: tuple[float, float]
    scale: float = 1.0
    r_u: VectorMap | None = None
    r_v: VectorMap | None = None
    r_uu: VectorMap | None = None
    r_uv: VectorMap | None = None
    r_vv: VectorMap | None = None

    @property
    def has_analytic_derivatives(self) -> bool:
        return None not in (self.r_u, self.r_v, self.r_uu, self.r_uv, self.r_vv)

    def numerical(self) -> "ParametricSurface":
        """Same embedding with every derivative taken by finite differences."""
        return ParametricSurface(
            self.name, self.embedding, self.u_range, self.v_range, self.scale
        )

    def derivatives(
        self, u: np.ndarray, v: np.ndarray
    ) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        h = FD_RELATIVE_STEP * self.scale
        r = self.embedding

        def fd_u(f: VectorMap) -> np.ndarray:
            return (f(u + h, v) - f(u - h, v)) / (2.0 * h)

        def fd_v(f: VectorMap) -> np.ndarray:
            return (f(u, v + h) - f(u, v - h)) / (2.0 * h)

        r_u = self.r_u(u, v) if self.r_u else fd_u(r)
        r_v = self.r_v(u, v) if self.r_v else fd_v(r)
        if self.r_uu:
            r_uu = self.r_uu(u, v)
        else:
            r_uu = (r(u + h, v) - 2.0 * r(u, v) + r(u - h, v)) / h**2
        if self.r_vv:
            r_vv = self.r_vv(u, v)
        else:
            r_vv = (r(u, v + h) - 2.0 * r(u, v) + r(u, v - h)) / h**2
        if self.r_uv:
            r_uv = self.r_uv(u, v)
        else:
            r_uv = (
                r(u + h, v + h) - r(u + h, v - h) - r(u - h, v + h) + r(u - h, v - h)
            ) / (4.0 * h**2)
        return r_u, r_v, r_uu, r_uv, r_vv


def check_derivatives(
    surf: ParametricSurface, u: ArrayLike, v: ArrayLike
) -> float:
    """Largest relative gap between analytic derivatives and finite differences."""
    uu, vv = np.broadcast_arrays(np.asarray(u, float), np.asarray(v, float))
    analytic = surf.derivatives(uu, vv)
    numeric = surf.numerical().derivatives(uu, vv)
    worst = 0.0
    for a, b in zip(analytic, numeric, strict=True):
        scale = max(float(np.max(np.abs(a))), 1.0)
        worst = max(worst, float(np.max(np.abs(a - b))) / scale)
    return worst


def curvatures(
    surf: ParametricSurface, u: ArrayLike, v: ArrayLike
) -> tuple[FloatArray, FloatArray]:
    """Mean and Gaussian curvature (M, K) from the fundamental forms.

    The normal is r_u x r_v; M is signed so that a sphere with outward normal has
    M = 1/R.
    """
    uu, vv = np.broadcast_arrays(np.asarray(u, float), np.asarray(v, float))
    r_u, r_v, r_uu, r_uv, r_vv = surf.derivatives(uu, vv)
    E = np.sum(r_u * r_u, axis=0)
    F = np.sum(r_u * r_v, axis=0)
    G = np.sum(r_v * r_v, axis=0)
    det = E * G - F**2
    if np.any(det <= 1e-14 * np.maximum(E * G, 1e-300)):
        raise DegenerateMetricError(f"{surf.name}: irregular parametrization")
    normal = np.cross(r_u, r_v, axis=0) / np.sqrt(det)
    L = np.sum(r_uu * normal, axis=0)
    M2 = np.sum(r_uv * normal, axis=0)
    N = np.sum(r_vv * normal, axis=0)
    gauss = (L * N - M2**2) / det
    mean = -(E * N - 2.0 * F * M2 + G * L) / (2.0 * det)
    return mean, gauss


def geometric_potential(
    surf: ParametricSurface, u: ArrayLike, v: ArrayLike, p: PhysParams
) -> FloatArray:
    """V_s = -(hbar^2/2m)(M^2 - K), where M^2 - K = ((k1 - k2)/2)^2."""
    mean, gauss = curvatures(surf, u, v)
    return -(p.hbar**2 / (2.0 * p.m)) * (mean**2 - gauss)


def _stack(*components: np.ndarray) -> np.ndarray:
    return np.stack(np.broadcast_arrays(*components))


def sphere_surface(radius: float = 1.0) -> ParametricSurface:
    """(u, v) = (polar theta, azimuth phi)."""
    R = radius

    def r(t: np.ndarray, f: np.ndarray) -> np.ndarray:
        ring = R * np.sin(t)
        return _stack(ring * np.cos(f), ring * np.sin(f), R * np.cos(t))

    return ParametricSurface(
        name=f"sphere(R={R:g})",
        embedding=r,
        u_range=(0.0, np.pi),
        v_range=(0.0, 2.0 * np.pi),
        scale=R,
        r_u=lambda t, f: _stack(
            R * np.cos(t) * np.cos(f), R * np.cos(t) * np.sin(f), -R * np.sin(t)
        ),
        r_v=lambda t, f: _stack(
            -R * np.sin(t) * np.sin(f), R * np.sin(t) * np.cos(f), 0.0 * t
        ),
        r_uu=lambda t, f: -r(t, f),
        r_uv=lambda t, f: _stack(
            -R * np.cos(t) * np.sin(f), R * np.cos(t) * np.cos(f), 0.0 * t
        ),
        r_vv=lambda t, f: _stack(
            -R * np.sin(t) * np.cos(f), -R * np.sin(t) * np.sin(f), 0.0 * t
        ),
    )


def cylinder_surface(radius: float = 1.0) -> ParametricSurface:
    """(u, v) = (azimuth, height) around the z axis."""
    R = radius
    return ParametricSurface(
        name=f"cylinder(R={R:g})",
        embedding=lambda a, z: _stack(R * np.cos(a), R * np.sin(a), z),
        u_range=(0.0, 2.0 * np.pi),
        v_range=(-1.0, 1.0),
        scale=R,
        r_u=lambda a, z: _stack(-R * np.sin(a), R * np.cos(a), 0.0 * z),
        r_v=lambda a, z: _stack(0.0 * a, 0.0 * a, 1.0 + 0.0 * z),
        r_uu=lambda a, z: _stack(-R * np.cos(a), -R * np.sin(a), 0.0 * z),
        r_uv=lambda a, z: _stack(0.0 * a, 0.0 * a, 0.0 * z),
        r_vv=lambda a, z: _stack(0.0 * a, 0.0 * a, 0.0 * z),
    )


def torus_surface(major: float = 2.0, minor: float = 0.5) -> ParametricSurface:
    """(u, v) = (toroidal angle, poloidal angle); v = 0 is the outer equator."""
    R, a = major, minor

    def ring(p: np.ndarray) -> np.ndarray:
        return R + a * np.cos(p)

    return ParametricSurface(
        name=f"torus(R={R:g}, r={a:g})",
        embedding=lambda t, p: _stack(
            ring(p) * np.cos(t), ring(p) * np.sin(t), a * np.sin(p)
        ),
        u_range=(0.0, 2.0 * np.pi),
        v_range=(0.0, 2.0 * np.pi),
        scale=a,
        r_u=lambda t, p: _stack(-ring(p) * np.sin(t), ring(p) * np.cos(t), 0.0 * t),
        r_v=lambda t, p: _stack(
            -a * np.sin(p) * np.cos(t), -a * np.sin(p) * np.sin(t), a * np.cos(p)
        ),
        r_uu=lambda t, p: _stack(-ring(p) * np.cos(t), -ring(p) * np.sin(t), 0.0 * t),
        r_uv=lambda t, p: _stack(
            a * np.sin(p) * np.sin(t), -a * np.sin(p) * np.cos(t), 0.0 * t
        ),
        r_vv=lambda t, p: _stack(
            -a * np.cos(p) * np.cos(t), -a * np.cos(p) * np.sin(t), -a * np.sin(p)
        ),
    )


def plane_surface() -> ParametricSurface:
    return ParametricSurface(
        name="plane",
        embedding=lambda x, y: _stack(x, y, 0.0 * x),
        u_range=(-1.0, 1.0),
        v_range=(-1.0, 1.0),
        r_u=lambda x, y: _stack(1.0 + 0.0 * x, 0.0 * x, 0.0 * x),
        r_v=lambda x, y: _stack(0.0 * x, 1.0 + 0.0 * y, 0.0 * x),
        r_uu=lambda x, y: _stack(0.0 * x, 0.0 * x, 0.0 * x),
        r_uv=lambda x, y: _stack(0.0 * x, 0.0 * x, 0.0 * x),
        r_vv=lambda x, y: _stack(0.0 * x, 0.0 * x, 0.0 * x),
    )
