"""Built-in scenarios, addressable by name from the command line."""

from pathlib import Path
from typing import Any

from ..errors import ConfigValidationError
from .parsing import _suggest_from, config_from_mapping, parse_config
from .schemas import ScenarioConfig

BUILTIN_SCENARIOS: dict[str, dict[str, Any]] = {
    "free_spreading": {
        "kind": "free_packet",
        "n": 512,
        "sigma": 1.0,
        "t_end": 2.0,
        "sample_every": 40,
    },
    "free_spreading_classical": {
        "kind": "free_packet",
        "n": 256,
        "sigma": 1.0,
        "t_end": 2.0,
        "sample_every": 40,
        "include_quantum": False,
    },
    "coherent_oscillation": {
        "kind": "harmonic",
        "n": 256,
        "x_min": -10.0,
        "length": 20.0,
        "x0": 2.0,
        "sigma": 0.7071067811865476,
        "t_end": 3.0,
        "sample_every": 100,
    },
    "kostin_damping": {
        "kind": "damped_harmonic",
        "n": 256,
        "x_min": -10.0,
        "length": 20.0,
        "x0": 2.0,
        "gamma": 0.2,
        "method": "kostin",
        "dt": 1e-3,
        "t_end": 20.0,
        "sample_every": 10,
    },
    "sphere_revival": {
        "kind": "sphere",
        "lmax": 4,
        "sphere_modes": [[1, 0, 1.0], [2, 0, 1.0]],
        "dt": 1e-3,
        "t_end": 4.0,
    },
    "quartic_well": {
        "kind": "custom_potential",
        "n": 256,
        "x_min": -8.0,
        "length": 16.0,
        "potential_coeffs": [0.0, 0.0, 0.5, 0.0, 0.1],
        "x0": 1.0,
        "sigma": 0.7,
        "method": "crank_nicolson",
        "dt": 1e-3,
        "t_end": 2.0,
        "sample_every": 5,
    },
    "constraint_certificate": {
        "kind": "verify_constraint",
        "n": 256,
        "seed": 42,
        "trials": 100,
    },
    "hydro_vs_schrodinger": {
        "kind": "compare_solvers",
        "n": 512,
        "sigma": 1.0,
        "t_end": 2.0,
        "sample_every": 40,
    },
    "classical_limit": {
        "kind": "classical_limit",
        "n": 256,
        "x_min": -8.0,
        "length": 16.0,
        "x0": 1.5,
        "gamma": 0.1,
        "quartic": 0.05,
        "t_end": 3.0,
        "sample_every": 250,
    },
}


def builtin(name: str) -> ScenarioConfig:
    try:
        data = BUILTIN_SCENARIOS[name]
    except KeyError:
        raise ConfigValidationError(
            f"unknown scenario '{name}'",
            key="scenario",
            suggestion=_suggest_from(name, BUILTIN_SCENARIOS),
        ) from None
    return config_from_mapping(data, name=name)


def resolve(target: str) -> ScenarioConfig:
    """A path to a scenario file, or the name of a built-in scenario."""
    path = Path(target)
    if path.suffix == ".toml" or path.exists():
        return parse_config(path)
    return builtin(target)
