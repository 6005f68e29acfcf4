# Copyright: (c) 2026, comdb contributors
# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)

import logging

import pydantic
import pytest

from comdb.coql.render import OutputFormat
from comdb.shell.config import ShellSettings, env_fallback, setting_fallback


def test_defaults():
    settings = ShellSettings.resolve(environ={})
    assert settings.color is True
    assert settings.output is OutputFormat.TABLE
    assert settings.level == logging.WARNING
    assert settings.batch is False


def test_environment_fallback():
    settings = ShellSettings.resolve(
        environ={"COMDB_COLOR": "0", "COMDB_FORMAT": "json", "COMDB_LOG_LEVEL": "debug"}
    )
    assert settings.color is False
    assert settings.output is OutputFormat.JSON
    assert settings.log_level == "DEBUG"


def test_options_win_over_the_environment():
    settings = ShellSettings.resolve(
        color=True,
        output="tsv",
        log_level="error",
        batch=True,
        environ={"COMDB_COLOR": "0", "COMDB_FORMAT": "json", "COMDB_LOG_LEVEL": "debug"},
    )
    assert settings.color is True
    assert settings.output is OutputFormat.TSV
    assert settings.level == logging.ERROR
    assert settings.batch is True


@pytest.mark.parametrize("text, expected", [("1", True), ("yes", True), ("off", False), ("false", False)])
def test_color_flag_text(text, expected):
    assert ShellSettings.resolve(environ={"COMDB_COLOR": text}).color is expected


@pytest.mark.parametrize(
    "environ", [{"COMDB_LOG_LEVEL": "chatty"}, {"COMDB_FORMAT": "yaml"}]
)
def test_invalid_values(environ):
    with pytest.raises(pydantic.ValidationError):
        ShellSettings.resolve(environ=environ)


def test_env_fallback_skips_empty_values():
    environ = {"FIRST": "", "SECOND": "value"}
    assert env_fallback("FIRST", "SECOND", environ=environ) == "value"
    assert env_fallback("MISSING", environ=environ) is None


def test_setting_fallback_gives_text():
    settings = ShellSettings(output="tsv")
    assert setting_fallback(settings, "output") == "tsv"
    assert setting_fallback(settings, "log_level") == "WARNING"
