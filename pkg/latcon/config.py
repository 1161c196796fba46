"""
Run settings.

Sources, lowest precedence first: the defaults below, an optional config file of ``key = value`` lines, the
``LATCON_CACHE`` environment variable, explicit overrides (the CLI flags).
"""

from __future__ import annotations

__all__ = ["Settings", "load_settings", "parse_config_file"]

import logging
import os
import pathlib
import re
from typing import Any, Literal, Mapping

import pydantic

from latcon.errors import ConfigError

_logger = logging.getLogger(__name__)

_LINE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(.*)$")


class Settings(pydantic.BaseModel):
    """
    Knobs shared by the library entry points and the CLI.

    Attributes:
        cache_dir: Where enumeration checkpoints and catalogs live (``LATCON_CACHE``).
        lattice_cap: Largest lattice size :func:`latcon.enumeration.enumerate_lattices` accepts.
        poset_cap: Largest poset size the candidate hunter enumerates.
        bruteforce_cap: Largest lattice the brute-force congruence oracle accepts.
        checkpoint_every: Log progress and save a partial checkpoint of the level being enumerated after this many
            lattices.
        workers: Worker threads for enumeration fan-out.
        log_level: Root logger level set by the CLI.
        strict_covers: Reject redundant covers in input files instead of reducing them.
    """

    model_config = pydantic.ConfigDict(extra="forbid", validate_assignment=True)

    cache_dir: pathlib.Path = pydantic.Field(
        default_factory=lambda: pathlib.Path("~/.cache/latcon").expanduser()
    )
    lattice_cap: int = pydantic.Field(11, ge=1)
    poset_cap: int = pydantic.Field(7, ge=0)
    bruteforce_cap: int = pydantic.Field(12, ge=1)
    checkpoint_every: int = pydantic.Field(10_000, ge=1)
    workers: int = pydantic.Field(1, ge=1)
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"] = "WARNING"
    strict_covers: bool = False

    @pydantic.field_validator("log_level", mode="before")
    @classmethod
    def _upper(cls, v: Any) -> Any:
        return v.upper() if isinstance(v, str) else v

    @pydantic.field_validator("cache_dir", mode="after")
    @classmethod
    def _expand(cls, v: pathlib.Path) -> pathlib.Path:
        return v.expanduser()


def parse_config_file(path: str | pathlib.Path) -> dict[str, str]:
    """
    Read ``key = value`` lines (``#`` comments, optional double quotes around values).

    Raises:
        ConfigError: A line is not of the form ``key = value``.
    """
    values: dict[str, str] = {}
    text = pathlib.Path(path).read_text(encoding="utf-8")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _LINE.match(line)
        if m is None:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'", details={"line": raw})
        value = m.group(2).strip()
        if len(value) >= 2 and value[0] == value[-1] == '"':
            value = value[1:-1]
        values[m.group(1)] = value
    return values


def load_settings(
    config_file: str | pathlib.Path | None = None,
    environ: Mapping[str, str] | None = None,
    **overrides: Any,
) -> Settings:
    """
    Merge the sources into validated settings.

    Args:
        config_file: Optional ``key = value`` file.
        environ: Environment to read ``LATCON_CACHE`` from (default: ``os.environ``).
        **overrides: Highest-precedence values; ``None`` values are ignored.

    Raises:
        ConfigError: Unknown keys or invalid values.
    """
    environ = os.environ if environ is None else environ
    values: dict[str, Any] = {}
    if config_file is not None:
        values.update(parse_config_file(config_file))
    if environ.get("LATCON_CACHE"):
        values["cache_dir"] = environ["LATCON_CACHE"]
    values.update({k: v for k, v in overrides.items() if v is not None})
    try:
        settings = Settings.model_validate(values)
    except pydantic.ValidationError as e:
        raise ConfigError("Invalid settings", details=e.errors(include_url=False)) from None
    _logger.debug("Settings: %s", settings)
    return settings
