"""Scenario documents: flat ``key=value`` files with dotted section names.

Example::

    # dense deployment, higher UAVs
    deployment.lambda_b_per_km2 = 10
    uav.height_m = 150
    power_control.epsilon_u = 0.8
    link.uu.N.m_fading = 2

Documents are parsed with python-dotenv (no variable interpolation) and
validated by the pydantic models in :mod:`.params`. Absent keys take their
reference defaults.
"""

import io
import logging
import math
from collections.abc import Iterable, Mapping
from pathlib import Path

from dotenv import dotenv_values
from pydantic import BaseModel, ValidationError

from ..errors import ScenarioError
from .params import (
    AnalyticsParams,
    AntennaParams,
    PowerControlParams,
    ScenarioParams,
    SimulationParams,
    parse_override_key,
)

logger = logging.getLogger(__name__)

LINK_PREFIX = "link."

# Top-level document keys → ScenarioParams field
_TOP_LEVEL_KEYS: dict[str, str] = {
    "deployment.lambda_b_per_km2": "lambda_b_per_km2",
    "deployment.lambda_u_per_km2": "lambda_u_per_km2",
    "bs.height_m": "h_b",
    "uav.height_m": "h_u",
    "gue.height_m": "h_g",
    "uav.sigma_u_m": "sigma_u",
    "uav.r_max_m": "r_max",
    "channel.carrier_freq_ghz": "carrier_freq_ghz",
    "channel.prb_bandwidth_hz": "prb_bandwidth_hz",
    "channel.noise_figure_db": "noise_figure_db",
    "channel.itu_a1": "itu_a1",
    "channel.itu_a2": "itu_a2",
    "channel.itu_a3": "itu_a3",
    "channel.los_truncation_m": "los_truncation_m",
    "coverage.sinr_threshold_db": "sinr_threshold_db",
}

# Nested sections map one-to-one onto their model's fields
_SECTIONS: dict[str, type[BaseModel]] = {
    "antenna": AntennaParams,
    "power_control": PowerControlParams,
    "analytics": AnalyticsParams,
    "simulation": SimulationParams,
}

_OPTIONAL_FLOAT_FIELDS = {"los_truncation_m", "interference_radius_m"}
_AUTO = "auto"


def document_keys() -> list[str]:
    """Every scalar key a scenario document may set (link overrides aside)."""
    keys = list(_TOP_LEVEL_KEYS)
    for section, model in _SECTIONS.items():
        keys.extend(f"{section}.{name}" for name in model.model_fields)
    return keys


def _coerce(field: str, raw: str | None) -> object:
    value = "" if raw is None else raw.strip()
    if field == "sinr_threshold_db":
        try:
            return tuple(float(v) for v in value.split(",") if v.strip())
        except ValueError as e:
            raise ScenarioError(f"sinr_threshold_db must be a comma list: {value!r}") from e
    if field in _OPTIONAL_FLOAT_FIELDS:
        if value in ("", _AUTO):
            return None
        try:
            return float(value)
        except ValueError as e:
            raise ScenarioError(f"{field} must be a number, 'inf' or 'auto'") from e
    return value


def _to_model_input(entries: Mapping[str, str | None]) -> dict[str, object]:
    data: dict[str, object] = {}
    sections: dict[str, dict[str, object]] = {}
    overrides: dict[str, float] = {}

    for key, raw in entries.items():
        if key in _TOP_LEVEL_KEYS:
            field = _TOP_LEVEL_KEYS[key]
            data[field] = _coerce(field, raw)
            continue

        if key.startswith(LINK_PREFIX):
            sub_key = key[len(LINK_PREFIX) :]
            try:
                parse_override_key(sub_key)
                overrides[sub_key] = float(raw or "")
            except ValueError as e:
                raise ScenarioError(f"invalid link override {key}={raw!r}: {e}") from e
            continue

        section, _, field = key.partition(".")
        model = _SECTIONS.get(section)
        if model is None or field not in model.model_fields:
            raise ScenarioError(f"unknown scenario key: {key!r}")
        sections.setdefault(section, {})[field] = _coerce(field, raw)

    data.update(sections)
    if overrides:
        data["link_overrides"] = overrides
    return data


def _check_syntax(text: str) -> None:
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ScenarioError(f"line {line_no}: expected key=value, got {stripped!r}")


def parse_document(text: str) -> dict[str, str | None]:
    """Parse a scenario document into raw key/value strings."""
    _check_syntax(text)
    return dict(dotenv_values(stream=io.StringIO(text), interpolate=False))


def parse_set_overrides(assignments: Iterable[str]) -> dict[str, str]:
    """Parse repeated ``--set key=value`` arguments, last one wins."""
    parsed: dict[str, str] = {}
    for item in assignments:
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise ScenarioError(f"--set expects key=value, got {item!r}")
        parsed[key.strip()] = value.strip()
    return parsed


def load_scenario(
    source: str | Path | Mapping[str, object] | None = None,
    overrides: Mapping[str, object] | Iterable[str] | None = None,
    *,
    stream: str | None = None,
) -> ScenarioParams:
    """Load and validate a scenario.

    Args:
        source: Path to a scenario document, or an already parsed mapping of
            document keys to values. ``None`` means the empty document.
        overrides: Extra ``key=value`` assignments (a mapping, or strings as
            given to ``--set``) applied on top of the document.
        stream: Document text, used instead of ``source``.

    Returns:
        Validated, immutable ScenarioParams

    Raises:
        ScenarioError: The document does not parse, names an unknown key or
            violates a parameter invariant
    """
    entries: dict[str, str | None] = {}
    if stream is not None:
        entries.update(parse_document(stream))
    elif isinstance(source, Mapping):
        entries.update({k: None if v is None else format_value(v) for k, v in source.items()})
    elif source is not None:
        path = Path(source)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise ScenarioError(f"cannot read scenario document {path}: {e}") from e
        entries.update(parse_document(text))
        logger.debug(f"Parsed {len(entries)} keys from {path}")

    if overrides:
        if isinstance(overrides, Mapping):
            extra = {k: format_value(v) for k, v in overrides.items()}
        else:
            extra = parse_set_overrides(overrides)
        entries.update(extra)

    try:
        return ScenarioParams.model_validate(_to_model_input(entries))
    except ValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in err['loc']) or 'scenario'}: {err['msg']}"
            for err in e.errors()
        )
        raise ScenarioError(f"invalid scenario: {problems}") from e


def format_value(value: object) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return _AUTO
    if isinstance(value, float):
        return repr(value) if math.isfinite(value) else ("inf" if value > 0 else "-inf")
    if isinstance(value, (tuple, list)):
        return ",".join(format_value(v) for v in value)
    return str(value)


def scenario_to_document(params: ScenarioParams) -> dict[str, str]:
    """Canonical key/value form: every scalar key plus explicit link overrides."""
    doc: dict[str, str] = {}
    for key, field in _TOP_LEVEL_KEYS.items():
        doc[key] = format_value(getattr(params, field))
    for section in _SECTIONS:
        model = getattr(params, section)
        for name in type(model).model_fields:
            doc[f"{section}.{name}"] = format_value(getattr(model, name))
    for key in sorted(params.link_overrides):
        doc[f"{LINK_PREFIX}{key}"] = format_value(params.link_overrides[key])
    return doc


def serialize_scenario(params: ScenarioParams) -> str:
    """Render the canonical scenario document; reparsing yields an equal model."""
    lines = [f"{key}={value}" for key, value in scenario_to_document(params).items()]
    return "\n".join(lines) + "\n"
