# Copyright: (c) 2026, comdb contributors
# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)
"""``comdb`` command-line entry point."""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

import pydantic

from comdb import errors, storage
from comdb._version import _VERSION
from comdb.coql.render import OutputFormat
from comdb.shell.config import ShellSettings
from comdb.shell.repl import Shell
from comdb.shell.session import Session

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="comdb", description="In-memory concept-oriented database shell."
    )
    parser.add_argument("--version", action="version", version=f"comdb {_VERSION}")
    parser.add_argument(
        "mode",
        nargs="?",
        choices=["repl"],
        help="start the interactive shell (the default without --batch or --query)",
    )
    parser.add_argument("--schema", help="schema file to load at start")
    parser.add_argument("--data", help="data file to load with the schema")
    mode = parser.add_mutually_exclusive_group()
    mode.add_argument("--batch", metavar="SCRIPT", help="run a command script and exit")
    mode.add_argument("--query", metavar="QUERY", help="run one COQL query and exit")
    parser.add_argument(
        "--format",
        choices=[output.value for output in OutputFormat],
        help="result format (env COMDB_FORMAT, default table)",
    )
    parser.add_argument("--log-level", help="logging level (env COMDB_LOG_LEVEL, default WARNING)")
    parser.add_argument(
        "--no-color",
        dest="color",
        action="store_false",
        default=None,
        help="disable ANSI styling (env COMDB_COLOR=0)",
    )
    return parser


def configure_logging(settings: ShellSettings):
    """Send log records to stderr so that stdout carries results only."""
    logging.basicConfig(level=settings.level, format=LOG_FORMAT, stream=sys.stderr, force=True)


def main(argv: Optional[List[str]] = None) -> int:
    """Run the shell.

    Returns:
        int: Process exit code; 1 when a batch command or the query fails.
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.mode == "repl" and (args.batch or args.query):
        parser.error("repl cannot be combined with --batch or --query")
    try:
        settings = ShellSettings.resolve(
            color=args.color,
            output=args.format,
            log_level=args.log_level,
            batch=bool(args.batch or args.query),
        )
    except pydantic.ValidationError as exc:
        parser.error(f"invalid settings: {exc.errors()[0]['msg']}")
    configure_logging(settings)

    session = Session(settings)
    shell = Shell(session)
    if args.data and not args.schema:
        parser.error("--data requires --schema")
    if args.schema:
        try:
            session.replace_schema(storage.load(args.schema, args.data))
        except errors.ComdbError as exc:
            session.error(exc.code, str(exc))
            return 1
        session.schema_path = args.schema
        session.data_path = args.data

    if args.query is not None:
        return 0 if shell.run_line(f"query {args.query}") else 1
    if args.batch is not None:
        path = Path(args.batch)
        try:
            lines = path.read_text(encoding="utf-8").splitlines()
        except OSError as exc:
            session.error(errors.StorageError.code, f"{path}: cannot read file: {exc.strerror}")
            return 1
        return shell.run_script(lines, str(path))
    return shell.interact()


if __name__ == "__main__":
    sys.exit(main())
