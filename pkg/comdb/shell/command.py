# Copyright: (c) 2026, comdb contributors
# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)
"""Shell command abstraction.

A command declares its options as an argument specification dictionary. Each
entry may carry ``type`` (``str``, ``int``, ``bool`` or ``list``), ``default``,
``choices``, ``required``, ``positional``, ``remainder``, ``help`` and
``fallback``, a ``(function, [names])`` pair consulted when the option is not
given. The dictionary is merged with the base one shared by every command
and turned into an argparse parser.

Classes:

    CommandParser
    Command

"""

import argparse
import logging
import shlex
from abc import ABC, abstractmethod
from typing import Any, Dict, List, Sequence, Tuple

from comdb import errors
from comdb.coql.evaluator import ResultTable
from comdb.coql.render import OutputFormat, render
from comdb.shell.config import ShellSettings, setting_fallback
from comdb.shell.session import Session

logger = logging.getLogger(__name__)

CONVERTERS = {"str": str, "int": int}


class CommandParser(argparse.ArgumentParser):
    """Argument parser that raises instead of exiting the process."""

    def error(self, message: str):
        raise errors.UsageError(f"{self.prog}: {message}")

    def exit(self, status: int = 0, message: str = None):
        raise errors.UsageError(message or f"{self.prog}: exited with status {status}")


def build_parser(name: str, spec: Dict[str, dict], description: str = "") -> CommandParser:
    """argparse parser for an argument specification.

    Defaults and requirements are applied after fallbacks, so the parser itself
    never fills them in.
    """
    parser = CommandParser(prog=name, description=description, add_help=False)
    for key, option in spec.items():
        kind = option.get("type", "str")
        kwargs: Dict[str, Any] = {"help": option.get("help"), "default": None}
        if option.get("positional"):
            if option.get("remainder"):
                continue
            if kind == "list":
                kwargs["nargs"] = "*"
            else:
                kwargs["nargs"] = "?"
                kwargs["type"] = CONVERTERS[kind]
                kwargs["choices"] = option.get("choices")
            parser.add_argument(key, **kwargs)
            continue
        flag = "--" + key.replace("_", "-")
        if kind == "bool":
            kwargs["action"] = "store_true"
        elif kind == "list":
            kwargs["action"] = "append"
        else:
            kwargs["type"] = CONVERTERS[kind]
            kwargs["choices"] = option.get("choices")
        parser.add_argument(flag, dest=key, **kwargs)
    return parser


class Command(ABC):
    """One shell command bound to a session."""

    summary = ""

    def __init__(self, session: Session):
        spec = get_base_arg_spec(session.settings)
        spec.update(self._arg_spec)
        self._spec = spec
        self._parser = build_parser(self.name, spec, self.summary)
        self._session = session
        self.params: Dict[str, Any] = {}

    @property
    @abstractmethod
    def name(self) -> str:
        """Command word typed at the prompt."""

    @property
    @abstractmethod
    def _arg_spec(self) -> dict:
        """Argument specification for the command."""

    @abstractmethod
    def run(self) -> str:
        """Execute with ``self.params``; return the text to print."""

    @property
    def usage(self) -> str:
        return self._parser.format_usage().strip()

    @property
    def schema(self):
        return self._session.schema

    @property
    def output(self) -> OutputFormat:
        return OutputFormat(self.params.get("format") or self._session.settings.output)

    def __call__(self, raw: str) -> str:
        self.params = self.parse(raw)
        logger.debug("running %s with %s", self.name, self.params)
        return self.run()

    def _remainder_key(self) -> str:
        for key, option in self._spec.items():
            if option.get("remainder"):
                return key
        return ""

    def _split(self, raw: str) -> Tuple[List[str], str]:
        """Argument words, and the raw trailing text for a remainder argument.

        Leading options and fixed positionals are taken one whitespace-separated
        word at a time; whatever follows them is the remainder, verbatim. A
        remainder wrapped in double quotes is unwrapped.
        """
        remainder = self._remainder_key()
        if not remainder:
            try:
                return shlex.split(raw), ""
            except ValueError as exc:
                raise errors.UsageError(f"{self.name}: {exc}") from exc
        positionals = sum(
            1
            for key, option in self._spec.items()
            if option.get("positional") and key != remainder
        )
        words: List[str] = []
        rest = raw.strip()
        while rest:
            word, _, tail = rest.partition(" ")
            if word.startswith("--"):
                words.append(word)
                option = self._spec.get(word[2:].replace("-", "_"), {})
                rest = tail.strip()
                if option.get("type", "str") != "bool" and rest:
                    value, _, rest = rest.partition(" ")
                    words.append(value)
                    rest = rest.strip()
                continue
            if positionals:
                words.append(word)
                positionals -= 1
                rest = tail.strip()
                continue
            break
        if len(rest) >= 2 and rest[0] == rest[-1] == '"':
            rest = rest[1:-1]
        return words, rest

    def parse(self, raw: str) -> Dict[str, Any]:
        """Parse a raw argument string into resolved parameters.

        Raises:
            UsageError: Unknown options, bad values or missing required arguments.
        """
        words, rest = self._split(raw)
        params = vars(self._parser.parse_args(words))
        remainder = self._remainder_key()
        if remainder:
            params[remainder] = rest or None
        for key, option in self._spec.items():
            value = params.get(key)
            if option.get("type") == "bool":
                params[key] = bool(value)
                continue
            if value in (None, []) and "fallback" in option:
                function, names = option["fallback"]
                value = function(*names)
                if value is not None:
                    value = self._convert(key, option, value)
            if value in (None, []) and "default" in option:
                value = option["default"]
            if value in (None, []) and option.get("required"):
                raise errors.UsageError(f"{self.name}: missing required argument '{key}'")
            params[key] = value
        return params

    def _convert(self, key: str, option: dict, value: str) -> Any:
        kind = option.get("type", "str")
        try:
            converted = CONVERTERS.get(kind, str)(value)
        except ValueError as exc:
            raise errors.UsageError(f"{self.name}: invalid value for '{key}': {value!r}") from exc
        if option.get("choices") and converted not in option["choices"]:
            raise errors.UsageError(
                f"{self.name}: '{key}' must be one of {', '.join(option['choices'])}"
            )
        return converted

    def _render(self, table: ResultTable) -> str:
        return render(self.schema, table, self.output)

    def _render_records(self, records: Sequence[dict]) -> str:
        """Render normalized records; nested mappings become ``key=value`` lists."""
        if not records:
            return ""
        columns = list(records[0])
        rows = []
        for record in records:
            row = []
            for column in columns:
                value = record.get(column)
                if isinstance(value, dict) and self.output is not OutputFormat.JSON:
                    value = ", ".join(
                        f"{k}={'null' if v is None else v}" for k, v in value.items()
                    )
                row.append(value)
            rows.append(tuple(row))
        return self._render(ResultTable(columns, rows))


def get_base_arg_spec(settings: ShellSettings) -> dict:
    """Return a dictionary with the options shared by every command."""
    return {
        "format": {
            "type": "str",
            "choices": [output.value for output in OutputFormat],
            "help": "output format: table, tsv or json",
            "fallback": (setting_fallback, [settings, "output"]),
        },
    }
