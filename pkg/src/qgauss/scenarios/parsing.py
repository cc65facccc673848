"""Scenario file parsing: flat TOML, strict keys, friendly messages."""

import difflib
import logging
import tomllib
from collections.abc import Iterable
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from ..errors import ConfigParseError, ConfigValidationError
from .schemas import ScenarioConfig

logger = logging.getLogger(__name__)

_LINE_MARKER = "(at line "


def _line_of(exc: tomllib.TOMLDecodeError) -> int | None:
    lineno = getattr(exc, "lineno", None)
    if isinstance(lineno, int):
        return lineno
    # older tomllib only reports the position inside the message
    text = str(exc)
    if _LINE_MARKER in text:
        tail = text.split(_LINE_MARKER, 1)[1]
        digits = tail.split(",", 1)[0].strip()
        if digits.isdigit():
            return int(digits)
    return None


def _suggest_from(key: str, candidates: Iterable[str]) -> str | None:
    matches = difflib.get_close_matches(key, list(candidates), n=1)
    return matches[0] if matches else None


def config_from_mapping(
    data: dict[str, Any], name: str | None = None
) -> ScenarioConfig:
    """Validate a flat key/value mapping into a ScenarioConfig."""
    data = dict(data)
    for key, value in data.items():
        if isinstance(value, dict):
            raise ConfigValidationError(
                f"'{key}' is a table; scenario files are flat key = value", key=key
            )
    if name is not None:
        data.setdefault("name", name)
    try:
        return ScenarioConfig.model_validate(data)
    except ValidationError as exc:
        error = exc.errors()[0]
        loc = [str(part) for part in error["loc"]]
        key = loc[0] if loc else None
        if error["type"] == "extra_forbidden" and key is not None:
            raise ConfigValidationError(
                f"unknown key '{key}'",
                key=key,
                suggestion=_suggest_from(key, ScenarioConfig.model_fields),
            ) from exc
        message = error["msg"].removeprefix("Value error, ")
        if key is not None:
            message = f"{key}: {message}"
        raise ConfigValidationError(message, key=key) from exc


def parse_config(path: Path | str) -> ScenarioConfig:
    """Read and validate a scenario file; the file stem is the default name."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError as exc:
        raise ConfigParseError(f"no such scenario file: {path}") from exc
    except UnicodeDecodeError as exc:
        raise ConfigParseError(f"{path} is not UTF-8 text") from exc
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigParseError(str(exc), line=_line_of(exc)) from exc
    cfg = config_from_mapping(data, name=path.stem)
    logger.debug("Parsed scenario %s (%s) from %s", cfg.name, cfg.kind, path)
    return cfg
