# Copyright: (c) 2026, comdb contributors
# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)
"""Shell session state.

Classes:

    Session

"""

import sys
from pathlib import Path
from typing import Optional, TextIO

from comdb.model.propagate import ConstraintKind, ConstraintSet
from comdb.model.schema import Schema
from comdb.shell.config import ShellSettings

RED = "\033[31m"
BOLD = "\033[1m"
RESET = "\033[0m"


class Session:
    """The one mutable model of a shell run, plus its constraint sets.

    Queries and navigation commands read snapshots; only ``load``, ``import``,
    ``item`` and ``define`` change ``schema``.

    Args:
        settings (ShellSettings): Resolved configuration.
        schema (Optional[Schema]): Initial model, empty by default.
        out (Optional[TextIO]): Result stream.
        err (Optional[TextIO]): Error stream.
    """

    def __init__(
        self,
        settings: Optional[ShellSettings] = None,
        schema: Optional[Schema] = None,
        out: Optional[TextIO] = None,
        err: Optional[TextIO] = None,
    ):
        self.settings = settings or ShellSettings()
        self.schema = schema if schema is not None else Schema()
        self.out = out or sys.stdout
        self.err = err or sys.stderr
        self.schema_path: Optional[Path] = None
        self.data_path: Optional[Path] = None
        self.running = True
        self.constraints = ConstraintSet(ConstraintKind.QUERY)
        self.static = ConstraintSet(ConstraintKind.STATIC)

    def replace_schema(self, schema: Schema):
        """Swap in a freshly loaded model and drop constraints built on the old one."""
        self.schema = schema
        self.clear_constraints()

    def clear_constraints(self):
        self.constraints = ConstraintSet(ConstraintKind.QUERY)
        self.static = ConstraintSet(ConstraintKind.STATIC)

    def style(self, text: str, code: str) -> str:
        if not self.settings.color:
            return text
        return f"{code}{text}{RESET}"

    def write(self, text: str):
        if not text:
            return
        self.out.write(text if text.endswith("\n") else text + "\n")

    def error(self, code: str, message: str):
        self.err.write(f"{self.style(f'error[{code}]', RED)}: {message}\n")
