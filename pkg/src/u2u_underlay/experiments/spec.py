"""Experiment descriptions and their sweep helpers."""

from pathlib import Path
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..errors import ScenarioError
from ..scenario.loader import (
    LINK_PREFIX,
    document_keys,
    format_value,
    load_scenario,
    scenario_to_document,
)
from ..scenario.params import ScenarioParams, parse_override_key
from ..simulation.estimators import MIN_RECORDS

ExperimentName = Literal[
    "ccdf_by_height", "power_decomposition", "epsilon_tradeoff", "custom_sweep"
]
Engine = Literal["analytic", "montecarlo", "both"]

ENGINE_ALIASES = {"mc": "montecarlo"}
EPSILON_GRID = tuple(round(0.1 * i, 1) for i in range(11))

# Sweep each named experiment runs when none is given
DEFAULT_SWEEPS: dict[str, tuple[str, tuple[float, ...]]] = {
    "ccdf_by_height": ("uav.height_m", (50.0, 150.0)),
    "power_decomposition": ("power_control.epsilon_u", EPSILON_GRID),
    "epsilon_tradeoff": ("power_control.epsilon_u", EPSILON_GRID),
}
TRADEOFF_SIGMAS = (50.0, 100.0, 150.0)
TRADEOFF_THRESHOLD_DB = -5.0


class ExperimentSpec(BaseModel):
    """What to run, with which engine, and where to put the results."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    name: ExperimentName
    engine: Engine = "analytic"
    sweep_key: str | None = None
    sweep_values: tuple[float, ...] = ()
    threshold_db: float | None = None
    out_dir: Path = Path("results")
    seed: int = 0
    drops: int = Field(default=10_000, ge=1)
    jobs: int = Field(default=1, ge=1)
    check: bool = False
    band: float = Field(default=0.02, gt=0)
    dump_records: bool = False
    progress: bool = True

    @field_validator("engine", mode="before")
    @classmethod
    def _engine_alias(cls, value: object) -> object:
        return ENGINE_ALIASES.get(str(value), value)

    @model_validator(mode="before")
    @classmethod
    def _default_sweep(cls, data: object) -> object:
        if isinstance(data, dict) and data.get("sweep_key") is None:
            default = DEFAULT_SWEEPS.get(str(data.get("name")))
            if default is not None:
                data = {**data, "sweep_key": default[0]}
                if not data.get("sweep_values"):
                    data["sweep_values"] = default[1]
        return data

    @model_validator(mode="after")
    def _check(self) -> "ExperimentSpec":
        if self.sweep_key is None:
            raise ValueError(f"{self.name} needs a sweep_key")
        if not is_sweepable(self.sweep_key):
            raise ValueError(f"unknown sweep key {self.sweep_key!r}")
        if not self.sweep_values:
            raise ValueError("sweep grid must not be empty")
        if self.uses_montecarlo and self.drops < MIN_RECORDS:
            raise ValueError(f"Monte Carlo engines need drops >= {MIN_RECORDS}, got {self.drops}")
        if self.name == "power_decomposition" and self.engine != "montecarlo":
            raise ValueError("power_decomposition is a Monte Carlo experiment (engine montecarlo)")
        if self.check and self.engine != "both":
            raise ValueError("--check compares engines and needs engine 'both'")
        return self

    @property
    def uses_analytic(self) -> bool:
        return self.engine in ("analytic", "both")

    @property
    def uses_montecarlo(self) -> bool:
        return self.engine in ("montecarlo", "both")


def is_sweepable(key: str) -> bool:
    """Scalar document keys and link-class overrides can be swept."""
    if key.startswith(LINK_PREFIX):
        try:
            parse_override_key(key[len(LINK_PREFIX) :])
        except ValueError:
            return False
        return True
    return key in document_keys() and key != "coverage.sinr_threshold_db"


def apply_setting(params: ScenarioParams, key: str, value: float) -> ScenarioParams:
    """Re-resolve a scenario with one document key replaced.

    Going through the canonical document keeps derived quantities (the
    height-dependent link classes, for instance) consistent with the new value.
    """
    if not is_sweepable(key):
        raise ScenarioError(f"unknown scenario key: {key!r}")
    number = float(value)
    document = scenario_to_document(params)
    document[key] = format_value(int(number) if number.is_integer() else number)
    return load_scenario(document)


def point_tag(key: str, value: float) -> str:
    """File-name fragment for one sweep point, e.g. ``epsilon_u0.6``."""
    return f"{key.rsplit('.', 1)[-1]}{value:g}"
