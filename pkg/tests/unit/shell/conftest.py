# Copyright: (c) 2026, comdb contributors
# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)

import io
import json

import pytest

from comdb.shell.config import ShellSettings
from comdb.shell.repl import Shell
from comdb.shell.session import Session


class ShellHarness:
    """Shell over in-memory streams; ``run`` returns the output of one line."""

    def __init__(self, schema=None, output="tsv"):
        self.session = Session(
            ShellSettings(color=False, output=output),
            schema=schema,
            out=io.StringIO(),
            err=io.StringIO(),
        )
        self.shell = Shell(self.session)

    @property
    def schema(self):
        return self.session.schema

    @property
    def errors(self) -> str:
        return self.session.err.getvalue()

    def run(self, line: str) -> str:
        start = len(self.session.out.getvalue())
        self.shell.execute(line)
        return self.session.out.getvalue()[start:]

    def lines(self, line: str):
        return self.run(line).splitlines()

    def records(self, line: str):
        word, _, rest = line.partition(" ")
        return [json.loads(text) for text in self.lines(f"{word} --format json {rest}")]


@pytest.fixture
def make_shell():
    return ShellHarness


@pytest.fixture
def flat1_shell(flat1):
    return ShellHarness(flat1)


@pytest.fixture
def inf1_shell(inf1):
    return ShellHarness(inf1)


@pytest.fixture
def olap1_shell(olap1):
    return ShellHarness(olap1)
