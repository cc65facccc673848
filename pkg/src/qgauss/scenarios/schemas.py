"""Pydantic schemas for scenario files and run reports."""

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..config import config

ScenarioKind = Literal[
    "free_packet",
    "harmonic",
    "damped_harmonic",
    "sphere",
    "custom_potential",
    "verify_constraint",
    "compare_solvers",
    "classical_limit",
]

DEFAULT_POTENTIALS: dict[str, str] = {
    "free_packet": "free",
    "harmonic": "harmonic",
    "damped_harmonic": "harmonic",
    "sphere": "free",
    "custom_potential": "polynomial",
    "verify_constraint": "harmonic",
    "compare_solvers": "free",
    "classical_limit": "harmonic",
}

SPHERE_DEFAULT_DT = 1e-3


class ScenarioConfig(BaseModel):
    """One scenario file after validation and defaulting."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    name: str = Field(default="scenario", min_length=1, description="Output stem")
    kind: ScenarioKind = Field(description="Which experiment to run")

    # physical parameters
    hbar: float = Field(default=1.0, gt=0.0, description="Reduced Planck constant")
    m: float = Field(default=1.0, gt=0.0, description="Particle mass")
    omega0: float = Field(default=1.0, ge=0.0, description="Oscillator frequency")
    gamma: float = Field(default=0.0, description="Friction coefficient")
    radius: float = Field(default=1.0, gt=0.0, description="Sphere radius R")
    sigma: float = Field(default=1.0, gt=0.0, description="Initial packet width")
    k0: float = Field(default=0.0, description="Initial wave number")
    x0: float = Field(default=0.0, description="Initial packet centre")
    include_quantum: bool = Field(
        default=True, description="Keep the quantum force in the hydro solver"
    )
    potential: Optional[Literal["free", "harmonic", "polynomial"]] = Field(
        default=None, description="External potential; defaults per kind"
    )
    potential_coeffs: list[float] = Field(
        default_factory=list, description="Polynomial coefficients c0, c1, ..."
    )
    quartic: float = Field(
        default=0.0, ge=0.0, description="x^4 coefficient added in classical_limit"
    )

    # numerical parameters
    n: int = Field(default=256, ge=8, description="Grid points")
    x_min: float = Field(default=-20.0, description="Left end of the periodic domain")
    length: float = Field(default=40.0, gt=0.0, description="Domain length")
    dt: Optional[float] = Field(
        default=None, gt=0.0, description="Time step; defaults to the stability rule"
    )
    t_end: float = Field(default=1.0, gt=0.0, description="Final time")
    sample_every: int = Field(default=1, ge=1, description="Steps between samples")
    seed: int = Field(default=0, ge=0, description="Seed for randomized checks")
    lmax: int = Field(default=8, ge=0, description="Sphere band limit")
    sphere_modes: list[list[float]] = Field(
        default_factory=lambda: [[1.0, 0.0, 1.0], [2.0, 0.0, 1.0]],
        description="Sphere superposition as [l, m, weight] triples",
    )
    method: Literal["splitstep", "crank_nicolson", "kostin"] = Field(
        default="splitstep", description="Wave-function propagator"
    )
    trials: int = Field(default=100, ge=1, description="Perturbations per state")
    epsilon: float = Field(default=1e-3, gt=0.0, description="Perturbation size")
    hbar_factors: list[float] = Field(
        default_factory=lambda: [1.0, 0.5, 0.25, 0.125],
        description="hbar multipliers swept by classical_limit",
    )

    @field_validator("gamma")
    @classmethod
    def _gamma_non_negative(cls, value: float) -> float:
        if value < 0.0:
            raise ValueError("gamma must be non-negative")
        return value

    @field_validator("sphere_modes")
    @classmethod
    def _modes_are_triples(cls, value: list[list[float]]) -> list[list[float]]:
        for mode in value:
            if len(mode) != 3:
                raise ValueError("sphere_modes entries must be [l, m, weight]")
            if mode[0] != int(mode[0]) or mode[1] != int(mode[1]):
                raise ValueError("sphere mode degree and order must be integers")
        return value

    @field_validator("hbar_factors")
    @classmethod
    def _factors_shrink(cls, value: list[float]) -> list[float]:
        if len(value) < 2 or any(not 0.0 < f <= 1.0 for f in value):
            raise ValueError("hbar_factors needs at least two values in (0, 1]")
        if any(b >= a for a, b in zip(value, value[1:])):
            raise ValueError("hbar_factors must be strictly decreasing")
        return value

    @model_validator(mode="before")
    @classmethod
    def _apply_defaults(cls, data: object) -> object:
        if not isinstance(data, dict):
            return data
        data = dict(data)
        kind = data.get("kind")
        if data.get("potential") is None and kind in DEFAULT_POTENTIALS:
            data["potential"] = DEFAULT_POTENTIALS[kind]
        if data.get("dt") is None and kind is not None:
            data["dt"] = default_dt(data)
        return data

    @model_validator(mode="after")
    def _kind_requirements(self) -> "ScenarioConfig":
        if self.kind == "damped_harmonic" and self.gamma <= 0.0:
            raise ValueError("damped_harmonic needs gamma > 0")
        if self.kind == "custom_potential" and not self.potential_coeffs:
            raise ValueError("custom_potential needs potential_coeffs")
        if self.potential == "polynomial" and not self.potential_coeffs:
            raise ValueError("a polynomial potential needs potential_coeffs")
        if self.potential == "harmonic" and self.omega0 <= 0.0:
            raise ValueError("a harmonic potential needs omega0 > 0")
        if self.kind == "sphere":
            if not self.sphere_modes:
                raise ValueError("sphere needs at least one entry in sphere_modes")
            top = max(int(mode[0]) for mode in self.sphere_modes)
            if top > self.lmax:
                raise ValueError(f"sphere mode degree {top} exceeds lmax {self.lmax}")
        if self.kind == "classical_limit" and self.omega0 <= 0.0:
            raise ValueError("classical_limit needs omega0 > 0")
        return self


def default_dt(data: dict[str, object]) -> float:
    """Stability rule C m dx^2 / hbar, or a fixed step for the exact sphere solver."""
    if data.get("kind") == "sphere":
        return SPHERE_DEFAULT_DT
    fields = ScenarioConfig.model_fields
    try:
        n = int(data.get("n", fields["n"].default))  # type: ignore[call-overload]
        length = float(
            data.get("length", fields["length"].default)  # type: ignore[arg-type]
        )
        hbar = float(data.get("hbar", fields["hbar"].default))  # type: ignore[arg-type]
        m = float(data.get("m", fields["m"].default))  # type: ignore[arg-type]
    except (TypeError, ValueError):
        return 1.0
    if n <= 0 or length <= 0.0 or hbar <= 0.0 or m <= 0.0:
        # field validation reports the bad value
        return 1.0
    dx = length / n
    return config.numerics.stability_factor * m * dx**2 / hbar


class CheckResult(BaseModel):
    """Outcome of one invariant check."""

    name: str
    passed: bool
    value: float = Field(description="Measured quantity")
    threshold: float = Field(description="Bound the value is compared against")
    detail: str = ""


class Provenance(BaseModel):
    config_sha256: str
    version: str
    seed: int
    generated_at: str = Field(description="UTC timestamp, excluded from comparisons")


class PlotFamily(BaseModel):
    """Columns of one observable family written to its own plot-data file."""

    description: str
    columns: list[str]
    rows: list[list[float]] = Field(default_factory=list)


class ErrorBlock(BaseModel):
    type: str
    message: str


class RunReport(BaseModel):
    """Everything a scenario run produces."""

    name: str
    kind: ScenarioKind
    provenance: Provenance
    columns: list[str] = Field(description="Column header of the series file")
    column_notes: dict[str, str] = Field(default_factory=dict)
    rows: list[list[float]] = Field(default_factory=list)
    checks: list[CheckResult] = Field(default_factory=list)
    families: dict[str, PlotFamily] = Field(default_factory=dict)
    primary_family: Optional[str] = None
    error: Optional[ErrorBlock] = None

    @property
    def passed(self) -> bool:
        return self.error is None and all(check.passed for check in self.checks)

    @property
    def exit_code(self) -> int:
        if self.error is not None:
            return 3
        return 0 if self.passed else 1
