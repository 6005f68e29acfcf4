# Copyright: (c) 2026, comdb contributors
# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)
"""Shell settings.

Each setting comes from the explicit command-line option, then its
environment variable, then the default.

Classes:

    ShellSettings

"""

import logging
import os
from enum import Enum
from typing import Mapping, Optional

import pydantic

from comdb.coql.render import OutputFormat

ENV_COLOR = "COMDB_COLOR"
ENV_FORMAT = "COMDB_FORMAT"
ENV_LOG_LEVEL = "COMDB_LOG_LEVEL"

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


def env_fallback(*names: str, environ: Optional[Mapping[str, str]] = None) -> Optional[str]:
    """First non-empty value among the environment variables ``names``."""
    environ = os.environ if environ is None else environ
    for name in names:
        value = environ.get(name)
        if value:
            return value
    return None


def setting_fallback(settings: "ShellSettings", name: str) -> Optional[str]:
    """Text value of the session setting ``name``, used as a command fallback."""
    value = getattr(settings, name)
    return value.value if isinstance(value, Enum) else value


class ShellSettings(pydantic.BaseModel):
    """Validated shell configuration."""

    color: bool = True
    output: OutputFormat = OutputFormat.TABLE
    log_level: str = "WARNING"
    batch: bool = False

    @pydantic.field_validator("log_level", mode="before")
    @classmethod
    def _known_level(cls, value: str) -> str:
        level = str(value).upper()
        if level not in LOG_LEVELS:
            raise ValueError(f"log level must be one of {', '.join(LOG_LEVELS)}")
        return level

    @pydantic.field_validator("color", mode="before")
    @classmethod
    def _color_flag(cls, value):
        if isinstance(value, str):
            return value.strip().lower() not in ("0", "false", "no", "off", "")
        return value

    @property
    def level(self) -> int:
        return getattr(logging, self.log_level)

    @classmethod
    def resolve(
        cls,
        color: Optional[bool] = None,
        output: Optional[str] = None,
        log_level: Optional[str] = None,
        batch: bool = False,
        environ: Optional[Mapping[str, str]] = None,
    ) -> "ShellSettings":
        """Build settings from options, falling back to the environment.

        Raises:
            pydantic.ValidationError: An option or variable has an invalid value.
        """
        values = {"batch": batch}
        for key, explicit, variable in (
            ("color", color, ENV_COLOR),
            ("output", output, ENV_FORMAT),
            ("log_level", log_level, ENV_LOG_LEVEL),
        ):
            value = explicit if explicit is not None else env_fallback(variable, environ=environ)
            if value is not None:
                values[key] = value
        return cls.model_validate(values)
