# Copyright: (c) 2026, comdb contributors
# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)
"""Read-eval-print loop and batch script runner.

Classes:

    Shell

"""

import logging
from typing import Dict, Iterable, Tuple

from comdb import errors
from comdb._version import _VERSION
from comdb.shell.command import Command
from comdb.shell.commands import ALIASES, COMMANDS, QUERY_KEYWORDS
from comdb.shell.session import BOLD, Session

logger = logging.getLogger(__name__)

PROMPT = "comdb> "


class Shell:
    """Dispatches command lines to the commands of one session."""

    def __init__(self, session: Session):
        self.session = session
        self.commands: Dict[str, Command] = {
            name: command(session) for name, command in COMMANDS.items()
        }

    def _resolve(self, line: str) -> Tuple[Command, str]:
        word, _, rest = line.strip().partition(" ")
        lowered = word.lower()
        if lowered in QUERY_KEYWORDS:
            return self.commands["query"], line.strip()
        name = ALIASES.get(lowered, lowered)
        if name not in self.commands:
            raise errors.UsageError(f"unknown command '{word}'; try 'help'")
        return self.commands[name], rest

    def execute(self, line: str):
        """Run one command line and print its output.

        Raises:
            ComdbError: The command failed.
        """
        command, raw = self._resolve(line)
        self.session.write(command(raw))

    def run_line(self, line: str) -> bool:
        """Run one line, reporting a failure on the error stream."""
        try:
            self.execute(line)
        except errors.ComdbError as exc:
            self.session.error(exc.code, str(exc))
            return False
        return True

    def run_script(self, lines: Iterable[str], source: str = "<script>") -> int:
        """Run a batch script: one command per line, ``#`` comments.

        Returns:
            int: 0, or 1 at the first failing command.
        """
        for number, line in enumerate(lines, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            logger.debug("%s:%d: %s", source, number, stripped)
            if not self.run_line(stripped):
                logger.info("batch stopped at %s:%d", source, number)
                return 1
            if not self.session.running:
                break
        return 0

    def interact(self) -> int:
        """Prompt until ``quit`` or end of input; errors do not end the session."""
        self.session.write(self.session.style(f"comdb {_VERSION}", BOLD) + " (type 'help')")
        while self.session.running:
            try:
                line = input(PROMPT)
            except EOFError:
                self.session.write("")
                break
            except KeyboardInterrupt:
                self.session.out.write("^C\n")
                continue
            if line.strip() and not line.strip().startswith("#"):
                self.run_line(line)
        return 0
