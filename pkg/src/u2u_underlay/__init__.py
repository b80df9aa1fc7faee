"""UAV-to-UAV underlay coverage - analytic and Monte Carlo SINR coverage toolkit."""

__version__ = "0.1.0"
__author__ = "Underlay Coverage Team"
__description__ = (
    "Coverage probabilities of UAV-to-UAV links sharing a cellular uplink, "
    "computed in closed form and cross-checked by simulation"
)

from .errors import (
    AcceptanceError,
    InsufficientRecordsError,
    NumericalError,
    ScenarioError,
    UnderlayError,
)
from .scenario import ScenarioParams, load_scenario

__all__ = [
    "AcceptanceError",
    "InsufficientRecordsError",
    "NumericalError",
    "ScenarioError",
    "ScenarioParams",
    "UnderlayError",
    "load_scenario",
]
