"""Surface-constrained dynamics: sphere spectral solver and geometric potential."""

from .geometry import (
    ParametricSurface,
    curvatures,
    cylinder_surface,
    geometric_potential,
    plane_surface,
    sphere_surface,
    torus_surface,
)
from .sphere import (
    SphereGrid,
    SphereState,
    SurfaceHydroState,
    laplace_beltrami,
    make_sphere_grid,
    sphere_to_hydro,
    spherical_harmonic_state,
    step_sphere_schrodinger,
)

__all__ = [
    "ParametricSurface",
    "SphereGrid",
    "SphereState",
    "SurfaceHydroState",
    "curvatures",
    "cylinder_surface",
    "geometric_potential",
    "laplace_beltrami",
    "make_sphere_grid",
    "plane_surface",
    "sphere_surface",
    "sphere_to_hydro",
    "spherical_harmonic_state",
    "step_sphere_schrodinger",
    "torus_surface",
]
