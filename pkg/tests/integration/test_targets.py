# Copyright: (c) 2026, comdb contributors
# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)
"""Runs every integration target through an in-memory shell.

A target is ``targets/<name>/tasks/main.yml``: one ``block`` of steps and an
optional ``always`` list run afterwards. A step either runs a command,

    - name: test create item
      comdb.item:
        args: X 30 u=2
        format: json
      check_mode: true
      register: result
      ignore_errors: true

or checks registered results,

    - name: verify create item
      assert:
        that:
          - result is changed
          - result.records | count == 1
          - result.records[0].slots.u == '2'
          - "'x1' in result.stdout"

``{{ name }}`` in a command is replaced from ``defaults/main.yml``, plus
``fixtures`` (the fixture directory) and ``output_dir`` (a scratch directory).
"""

import io
import json
import operator
import re
import shlex
from pathlib import Path

import pytest
import yaml

from comdb.shell.config import ShellSettings
from comdb.shell.repl import Shell
from comdb.shell.session import Session

TARGETS = Path(__file__).resolve().parent / "targets"
FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"

COMMAND_PREFIX = "comdb."
VARIABLE = re.compile(r"\{\{\s*(\w+)\s*\}\}")
NESTING_LIMIT = 8
PATH = r"[A-Za-z_]\w*(?:\.\w+|\[\d+\])*"
TEST = re.compile(rf"^(?P<path>{PATH})\s+is\s+(?P<negate>not\s+)?(?P<test>\w+)$")
MEMBERSHIP = re.compile(rf"^(?P<value>.+?)\s+(?P<negate>not\s+)?in\s+(?P<path>{PATH})$")
COMPARISON = re.compile(
    rf"^(?P<path>{PATH})(?P<count>\s*\|\s*count)?\s*(?P<op>==|!=|>=|<=|>|<)\s*(?P<value>.+)$"
)
OPERATORS = {
    "==": operator.eq,
    "!=": operator.ne,
    ">=": operator.ge,
    "<=": operator.le,
    ">": operator.gt,
    "<": operator.lt,
}


def _records(stdout: str) -> list:
    records = []
    for line in stdout.splitlines():
        try:
            record = json.loads(line)
        except ValueError:
            continue
        if isinstance(record, dict):
            records.append(record)
    return records


class TargetRunner:
    """Executes the steps of one target against a fresh session."""

    def __init__(self, variables: dict):
        self.variables = variables
        self.registered = {}
        self.session = Session(
            ShellSettings(color=False, output="tsv"), out=io.StringIO(), err=io.StringIO()
        )
        self.shell = Shell(self.session)

    def substitute(self, text) -> str:
        def replace(match):
            name = match.group(1)
            if name not in self.variables:
                raise KeyError(f"undefined variable '{name}'")
            return str(self.variables[name])

        text = str(text)
        # Defaults may refer to other variables.
        for _ in range(NESTING_LIMIT):
            if not VARIABLE.search(text):
                break
            text = VARIABLE.sub(replace, text)
        return text

    def command_line(self, name: str, params: dict, check_mode: bool) -> str:
        words = [name]
        for key, value in (params or {}).items():
            if key == "args":
                continue
            flag = "--" + key.replace("_", "-")
            if value is True:
                words.append(flag)
            elif isinstance(value, list):
                for member in value:
                    words.extend([flag, shlex.quote(self.substitute(member))])
            elif value is not False and value is not None:
                words.extend([flag, shlex.quote(self.substitute(value))])
        if check_mode:
            words.append("--check")
        if params and params.get("args") is not None:
            words.append(self.substitute(params["args"]))
        return " ".join(words)

    def run_command(self, step: dict, key: str) -> dict:
        line = self.command_line(
            key[len(COMMAND_PREFIX) :], step[key], step.get("check_mode", False)
        )
        out_start = len(self.session.out.getvalue())
        err_start = len(self.session.err.getvalue())
        rc = 0 if self.shell.run_line(line) else 1
        stdout = self.session.out.getvalue()[out_start:]
        records = _records(stdout)
        result = {
            "line": line,
            "rc": rc,
            "failed": rc != 0,
            "stdout": stdout.rstrip("\n"),
            "stdout_lines": stdout.splitlines(),
            "stderr": self.session.err.getvalue()[err_start:].rstrip("\n"),
            "records": records,
            "changed": any(r.get("changed") is True for r in records),
        }
        if result["failed"] and not step.get("ignore_errors"):
            pytest.fail(f"{step['name']}: '{line}' failed: {result['stderr']}")
        if "register" in step:
            self.registered[step["register"]] = result
        return result

    def resolve(self, path: str):
        tokens = re.findall(r"\w+|\[\d+\]", path)
        value = self.registered[tokens[0]]
        for token in tokens[1:]:
            value = value[int(token[1:-1])] if token.startswith("[") else value[token]
        return value

    def holds(self, condition: str) -> bool:
        condition = condition.strip()
        match = TEST.match(condition)
        if match:
            result = self.resolve(match["path"])
            outcome = {
                "succeeded": not result["failed"],
                "failed": result["failed"],
                "changed": result["changed"],
            }[match["test"]]
            return outcome != bool(match["negate"])
        match = COMPARISON.match(condition)
        if match:
            value = self.resolve(match["path"])
            if match["count"]:
                value = len(value)
            return OPERATORS[match["op"]](value, yaml.safe_load(match["value"]))
        match = MEMBERSHIP.match(condition)
        if match:
            found = yaml.safe_load(match["value"]) in self.resolve(match["path"])
            return found != bool(match["negate"])
        raise ValueError(f"cannot evaluate condition '{condition}'")

    def check(self, step: dict):
        that = step["assert"]["that"]
        for condition in [that] if isinstance(that, str) else that:
            assert self.holds(condition), f"{step['name']}: {condition}"

    def run_step(self, step: dict):
        if "assert" in step:
            self.check(step)
            return
        commands = [key for key in step if key.startswith(COMMAND_PREFIX)]
        if len(commands) != 1:
            raise ValueError(f"step '{step.get('name')}' names no single command")
        self.run_command(step, commands[0])

    def run(self, plays: list):
        for play in plays:
            try:
                for step in play.get("block", []):
                    self.run_step(step)
            finally:
                for step in play.get("always", []):
                    self.run_step(step)


def load_yaml(path: Path):
    if not path.exists():
        return {}
    with path.open(encoding="utf-8") as handle:
        return yaml.safe_load(handle) or {}


@pytest.mark.parametrize(
    "target", sorted(p.name for p in TARGETS.iterdir() if (p / "tasks" / "main.yml").exists())
)
def test_target(target, tmp_path):
    directory = TARGETS / target
    variables = {"fixtures": FIXTURES, "output_dir": tmp_path}
    variables.update(load_yaml(directory / "defaults" / "main.yml"))
    TargetRunner(variables).run(load_yaml(directory / "tasks" / "main.yml"))


def test_condition_language():
    runner = TargetRunner({})
    runner.registered["result"] = {
        "failed": False,
        "changed": True,
        "stdout": "x1\ty2",
        "records": [{"slots": {"u": "2"}}],
    }
    assert runner.holds("result is succeeded")
    assert runner.holds("result is not failed")
    assert runner.holds("result.records | count == 1")
    assert runner.holds("result.records[0].slots.u == '2'")
    assert runner.holds("'y2' in result.stdout")
    assert runner.holds("'z' not in result.stdout")
    with pytest.raises(ValueError):
        runner.holds("result.stdout ~ x")
    with pytest.raises(KeyError):
        runner.substitute("{{ missing }}")
