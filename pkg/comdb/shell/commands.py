# Copyright: (c) 2026, comdb contributors
# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)
"""Shell commands.

Every command reads its parameters from an argument specification and
returns the text to print. Model errors propagate to the shell loop.
"""

import logging
import re
from typing import Dict, List, Optional, Type

from tabulate import tabulate

from comdb import errors, storage
from comdb.coql import CubeDimension, Measure, cube, register_derived, run_query
from comdb.coql.evaluator import ResultTable
from comdb.coql.render import OutputFormat
from comdb.model import flatten as flattening
from comdb.model.navigate import Collection, deproject, dot, project
from comdb.model.propagate import (
    check_consistency,
    constrain,
    infer,
    propagate_down,
    propagate_up,
)
from comdb.model.schema import ItemRef
from comdb.shell import normalizers
from comdb.shell.command import Command
from comdb.shell.info_command import InfoCommand
from comdb.shell.standard_command import StandardCommand

logger = logging.getLogger(__name__)

MEASURE_PATTERN = re.compile(r"^(?P<name>\w+)=(?P<func>\w+)(?:\((?P<expr>.*)\))?$")


def _collection_table(collection: Collection) -> ResultTable:
    return ResultTable([collection.concept or "value"], [(m,) for m in collection])


def _source(schema, concept: str, ids: Optional[List[str]]) -> Collection:
    """All items of ``concept``, or only the listed ones."""
    if not ids:
        return Collection.of_concept(schema, concept)
    refs = [ItemRef(concept, item_id) for item_id in ids]
    for ref in refs:
        schema.get_item(ref)
    return Collection(concept, refs)


class LoadCommand(Command):
    """Load a schema file and, optionally, a data file."""

    summary = "load SCHEMA [DATA]: replace the model with the files' content"

    @property
    def name(self) -> str:
        return "load"

    @property
    def _arg_spec(self) -> dict:
        return {
            "schema_file": {"type": "str", "positional": True, "required": True},
            "data_file": {"type": "str", "positional": True},
        }

    def run(self) -> str:
        schema = storage.load(self.params["schema_file"], self.params["data_file"])
        self._session.replace_schema(schema)
        self._session.schema_path = self.params["schema_file"]
        self._session.data_path = self.params["data_file"]
        return f"loaded {len(schema.concepts)} concept(s), {schema.count_items()} item(s)"


class SaveCommand(Command):
    """Write the model back to text files."""

    summary = "save [SCHEMA] [DATA]: write canonical schema and data text"

    @property
    def name(self) -> str:
        return "save"

    @property
    def _arg_spec(self) -> dict:
        return {
            "schema_file": {"type": "str", "positional": True},
            "data_file": {"type": "str", "positional": True},
        }

    def run(self) -> str:
        schema_path = self.params["schema_file"] or self._session.schema_path
        data_path = self.params["data_file"] or self._session.data_path
        if schema_path is None:
            raise errors.UsageError("save: no schema file given and none was loaded")
        storage.save(self.schema, schema_path, data_path)
        return f"saved {self.schema.count_items()} item(s)"


class ImportCommand(Command):
    """Ingest CSV master tables described by a YAML map."""

    summary = "import MAP: ingest the CSV files named in a YAML ingest map"

    @property
    def name(self) -> str:
        return "import"

    @property
    def _arg_spec(self) -> dict:
        return {"map_file": {"type": "str", "positional": True, "required": True}}

    def run(self) -> str:
        report = storage.ingest_files(self.schema, self.params["map_file"])
        lines = [self._render_records(normalizers.normalize_ingest_report(report))]
        for table in report.tables:
            lines.extend(f"rejected {message}" for message in table.errors)
        return "\n".join(lines)


class QueryCommand(Command):
    """Evaluate a COQL query on a snapshot of the model."""

    summary = "query [--constrained] TEXT: run a COQL query"

    @property
    def name(self) -> str:
        return "query"

    @property
    def _arg_spec(self) -> dict:
        return {
            "constrained": {
                "type": "bool",
                "help": "evaluate with the session's query constraints applied",
            },
            "text": {"type": "str", "positional": True, "remainder": True, "required": True},
        }

    def run(self) -> str:
        constraints = self._session.constraints if self.params["constrained"] else None
        return self._render(run_query(self.schema, self.params["text"], constraints))


class FlattenCommand(Command):
    """Print the primitive table."""

    summary = "flatten [--tsv] [--bottom CONCEPT]: print the primitive semantics"

    @property
    def name(self) -> str:
        return "flatten"

    @property
    def _arg_spec(self) -> dict:
        return {
            "tsv": {"type": "bool", "help": "dotted-path header, nulls as empty fields"},
            "bottom": {"type": "str"},
        }

    def run(self) -> str:
        table = flattening.flatten(self.schema, self.params["bottom"])
        if self.params["tsv"]:
            return flattening.render_tsv(self.schema, table)
        result = ResultTable(
            ["item"] + table.column_names(),
            [(row.item.id,) + row.cells for row in table.rows],
        )
        return self._render(result)


class ProjectCommand(Command):
    """Project (or dot) items along a dimension path."""

    summary = "project [--dot] CONCEPT PATH [ID ...]: move items up a dimension path"

    @property
    def name(self) -> str:
        return "project"

    @property
    def _arg_spec(self) -> dict:
        return {
            "concept": {"type": "str", "positional": True, "required": True},
            "path": {"type": "str", "positional": True, "required": True},
            "ids": {"type": "list", "positional": True},
            "dot": {"type": "bool", "help": "keep one output per input item"},
        }

    def run(self) -> str:
        source = _source(self.schema, self.params["concept"], self.params["ids"])
        if self.params["dot"]:
            result = dot(self.schema, source, self.params["path"])
            if result.dropped:
                logger.info("dot dropped %d item(s) with a null walk", result.dropped)
            return self._render(_collection_table(result.collection))
        return self._render(_collection_table(project(self.schema, source, self.params["path"])))


class DeprojectCommand(Command):
    """Collect the sub-items referencing the given items."""

    summary = "deproject CONCEPT DIMS TARGET [ID ...]: move items down to TARGET"

    @property
    def name(self) -> str:
        return "deproject"

    @property
    def _arg_spec(self) -> dict:
        return {
            "concept": {"type": "str", "positional": True, "required": True},
            "dims": {
                "type": "str",
                "positional": True,
                "required": True,
                "help": "dotted dimension chain, nearest to CONCEPT first",
            },
            "target": {"type": "str", "positional": True, "required": True},
            "ids": {"type": "list", "positional": True},
        }

    def run(self) -> str:
        source = _source(self.schema, self.params["concept"], self.params["ids"])
        result = deproject(
            self.schema, source, self.params["dims"].split("."), self.params["target"]
        )
        return self._render(_collection_table(result))


class ConstrainCommand(Command):
    """Add an elementary constraint to the session."""

    summary = "constrain [--static] CONCEPT CONDITION | constrain --clear"

    @property
    def name(self) -> str:
        return "constrain"

    @property
    def _arg_spec(self) -> dict:
        return {
            "static": {"type": "bool", "help": "add to the static (integrity) constraints"},
            "clear": {"type": "bool", "help": "drop every session constraint"},
            "concept": {"type": "str", "positional": True},
            "predicate": {"type": "str", "positional": True, "remainder": True},
        }

    def run(self) -> str:
        if self.params["clear"]:
            self._session.clear_constraints()
            return "constraints cleared"
        if not self.params["concept"] or not self.params["predicate"]:
            raise errors.UsageError("constrain: CONCEPT and CONDITION are required")
        possibility = constrain(self.schema, self.params["concept"], self.params["predicate"])
        target = self._session.static if self.params["static"] else self._session.constraints
        target.add(possibility)
        return self._render_records(
            [normalizers.normalize_possibility(target.maps[possibility.concept])]
        )


class PropagateCommand(Command):
    """Propagate the session's query constraints."""

    summary = "propagate [--up]: propagate constraints down (default) or up"

    @property
    def name(self) -> str:
        return "propagate"

    @property
    def _arg_spec(self) -> dict:
        return {"down": {"type": "bool"}, "up": {"type": "bool"}}

    def run(self) -> str:
        if self.params["down"] and self.params["up"]:
            raise errors.UsageError("propagate: choose one of --down and --up")
        constraints = self._session.constraints
        if self.params["up"]:
            result = propagate_up(self.schema, constraints)
        else:
            result = propagate_down(self.schema, constraints)
        self._session.constraints = result
        return self._render_records(
            [normalizers.normalize_possibility(result.maps[c]) for c in sorted(result.maps)]
        )


class InferCommand(Command):
    """Infer target possibilities through the bottom concept."""

    summary = "infer [--from CONCEPT --via PATH ...] --to CONCEPT --via PATH"

    @property
    def name(self) -> str:
        return "infer"

    @property
    def _arg_spec(self) -> dict:
        return {
            "from": {"type": "list", "default": [], "help": "constrained source concept"},
            "via": {
                "type": "list",
                "required": True,
                "help": "path from the bottom, one per --from and then one for --to",
            },
            "to": {"type": "str", "required": True},
            "bottom": {"type": "str"},
        }

    def run(self) -> str:
        sources, vias = self.params["from"], self.params["via"]
        if len(vias) != len(sources) + 1:
            raise errors.UsageError("infer: give one --via per --from plus one for --to")
        constraints = self._session.constraints
        result = infer(
            self.schema,
            [
                (constraints.get(self.schema, concept), path)
                for concept, path in zip(sources, vias)
            ],
            (self.params["to"], vias[-1]),
            self.params["bottom"],
        )
        return self._render_records([normalizers.normalize_possibility(result)])


class CheckCommand(Command):
    """Check stored data against the static constraints."""

    summary = "check: test the data against the static constraints"

    @property
    def name(self) -> str:
        return "check"

    @property
    def _arg_spec(self) -> dict:
        return {}

    def run(self) -> str:
        if check_consistency(self.schema, self._session.static):
            return "consistent"
        return "inconsistent"


class ValidateCommand(Command):
    """Print the schema validation report."""

    summary = "validate [--require-bottom]: report structural violations"

    @property
    def name(self) -> str:
        return "validate"

    @property
    def _arg_spec(self) -> dict:
        return {"require_bottom": {"type": "bool"}}

    def run(self) -> str:
        report = self.schema.validate(self.params["require_bottom"])
        if report.ok:
            return "ok"
        return self._render_records(
            [{"code": v.code, "message": v.message} for v in report.violations]
        )


class StatsCommand(InfoCommand):
    """Per-concept order metrics."""

    summary = "stats [--primitive] [CONCEPT]: dimensionality and cardinality metrics"

    @property
    def name(self) -> str:
        return "stats"

    @property
    def _arg_spec(self) -> dict:
        return {
            "concept": {"type": "str", "positional": True},
            "primitive": {"type": "bool", "help": "only primitive concepts"},
        }

    def _resource_uniquely_identifiable(self) -> bool:
        return self.params["concept"] is not None

    def _filter(self, resource: dict) -> bool:
        return not self.params["primitive"] or resource["dimensionality"] == 0

    def _get_single_resource(self) -> Optional[dict]:
        return normalizers.normalize_metrics(self.schema, self.params["concept"])

    def _get_resource_list(self) -> List[dict]:
        return [normalizers.normalize_metrics(self.schema, c) for c in sorted(self.schema.concepts)]


class ConceptsCommand(InfoCommand):
    """List concept definitions."""

    summary = "concepts [--kind value|entity] [NAME]: list concepts and dimensions"

    @property
    def name(self) -> str:
        return "concepts"

    @property
    def _arg_spec(self) -> dict:
        return {
            "concept": {"type": "str", "positional": True},
            "kind": {"type": "str", "choices": ["value", "entity"]},
        }

    def _resource_uniquely_identifiable(self) -> bool:
        return self.params["concept"] is not None

    def _filter(self, resource: dict) -> bool:
        return self.params["kind"] is None or resource["kind"] == self.params["kind"]

    def _get_single_resource(self) -> Optional[dict]:
        return normalizers.normalize_concept(self.schema, self.params["concept"])

    def _get_resource_list(self) -> List[dict]:
        return [normalizers.normalize_concept(self.schema, c) for c in sorted(self.schema.concepts)]


class CubeCommand(Command):
    """Aggregate fact items over a product of levels."""

    summary = "cube --fact F --dim PATH:LEVEL ... --measure NAME=FUNC(EXPR) ... [--where COND]"

    @property
    def name(self) -> str:
        return "cube"

    @property
    def _arg_spec(self) -> dict:
        return {
            "fact": {"type": "str", "required": True},
            "dim": {"type": "list", "required": True, "help": "PATH:LEVEL"},
            "measure": {
                "type": "list",
                "default": ["count=COUNT"],
                "help": "NAME=FUNC or NAME=FUNC(EXPR)",
            },
            "where": {"type": "str", "help": "condition on fact items"},
        }

    def _dimensions(self) -> List[CubeDimension]:
        dims = []
        for text in self.params["dim"]:
            path, sep, level = text.partition(":")
            if not sep or not path or not level:
                raise errors.UsageError(f"cube: dimension '{text}' is not PATH:LEVEL")
            dims.append(CubeDimension(path, level))
        return dims

    def _measures(self) -> List[Measure]:
        measures = []
        for text in self.params["measure"]:
            match = MEASURE_PATTERN.match(text.strip())
            if match is None:
                raise errors.UsageError(f"cube: measure '{text}' is not NAME=FUNC(EXPR)")
            measures.append(Measure(match["name"], match["func"], match["expr"] or None))
        return measures

    def run(self) -> str:
        table = cube(
            self.schema,
            self.params["fact"],
            self._dimensions(),
            self._measures(),
            self.params["where"],
        )
        return self._render(table)


class DefineCommand(Command):
    """Register a derived property."""

    summary = "define Owner::name(Type p, ...) { RETURN expr; }"

    @property
    def name(self) -> str:
        return "define"

    @property
    def _arg_spec(self) -> dict:
        return {
            "definition": {
                "type": "str",
                "positional": True,
                "remainder": True,
                "required": True,
            }
        }

    def run(self) -> str:
        prop = register_derived(self.schema, self.params["definition"])
        return f"defined {prop.owner}::{prop.name}"


class ItemCommand(StandardCommand):
    """Create, update or delete one item."""

    summary = "item CONCEPT ID [DIM=REF ...] [--state present|absent] [--check]"

    @property
    def name(self) -> str:
        return "item"

    @property
    def _arg_spec(self) -> dict:
        return {
            "state": {"type": "str", "choices": ["absent", "present"], "default": "present"},
            "check": {"type": "bool", "help": "report the change without making it"},
            "concept": {"type": "str", "positional": True, "required": True},
            "id": {"type": "str", "positional": True, "required": True},
            "slots": {"type": "list", "positional": True, "help": "DIM=REF, REF may be null"},
        }

    @property
    def _ref(self) -> ItemRef:
        return ItemRef(self.params["concept"], self.params["id"])

    def _requested_slots(self) -> Dict[str, Optional[str]]:
        requested: Dict[str, Optional[str]] = {}
        concept = self.schema.concept(self.params["concept"])
        for pair in self.params["slots"] or []:
            dim, sep, raw = pair.partition("=")
            if not sep:
                raise errors.UsageError(f"item: slot '{pair}' is not DIM=REF")
            concept.dimension(dim)
            requested[dim] = None if raw == "null" else raw
        if requested and concept.is_value:
            raise errors.UsageError(f"item: value concept '{concept.name}' has no slots")
        return requested

    def _bound_slots(self, requested: Dict[str, Optional[str]]) -> dict:
        concept = self.schema.concept(self.params["concept"])
        bound = {}
        for dim, raw in requested.items():
            domain = concept.dimension(dim).domain
            if raw is None:
                bound[dim] = None
            elif self.schema.concept(domain).is_value:
                bound[dim] = self.schema.ensure_value(domain, raw)
            else:
                bound[dim] = ItemRef(domain, raw)
        return bound

    def _get_resource(self) -> Optional[dict]:
        self.schema.concept(self.params["concept"])
        if not self.schema.has_item(self._ref):
            return None
        return normalizers.normalize_item(self.schema, self.schema.get_item(self._ref))

    def _validate_deletion(self, resource: dict):
        self.schema.check_unreferenced(self._ref)

    def _perform_deletion(self, resource: dict):
        self.schema.delete_item(self._ref)

    def _get_update_requests(self, resource: dict) -> dict:
        concept = self.schema.concept(self.params["concept"])
        changes = {}
        for dim, raw in self._requested_slots().items():
            current = resource["slots"].get(dim)
            wanted = raw
            domain = self.schema.concept(concept.dimension(dim).domain)
            if raw is not None and domain.is_value:
                wanted = domain.value_type.render(domain.value_type.coerce(raw))
            if wanted != current:
                changes[dim] = raw
        if changes:
            return {"slots": changes}
        return {}

    def _perform_update(self, requests: dict, resource: dict) -> dict:
        self.schema.update_item(
            self.params["concept"], self.params["id"], self._bound_slots(requests["slots"])
        )
        return normalizers.normalize_item(self.schema, self.schema.get_item(self._ref))

    def _validate_creation_params(self):
        self._requested_slots()

    def _perform_creation(self) -> dict:
        concept = self.schema.concept(self.params["concept"])
        if concept.is_value:
            ref = self.schema.add_value(concept.name, self.params["id"])
        else:
            ref = self.schema.add_item(
                concept.name, self.params["id"], self._bound_slots(self._requested_slots())
            )
        return normalizers.normalize_item(self.schema, self.schema.get_item(ref))


class HelpCommand(Command):
    """List commands, or show one command's usage."""

    summary = "help [COMMAND]: list commands or show usage"

    @property
    def name(self) -> str:
        return "help"

    @property
    def _arg_spec(self) -> dict:
        return {"command": {"type": "str", "positional": True}}

    def run(self) -> str:
        commands = {name: cls(self._session) for name, cls in COMMANDS.items()}
        wanted = self.params["command"]
        if wanted:
            if wanted not in commands:
                raise errors.UsageError(f"help: unknown command '{wanted}'")
            return f"{commands[wanted].summary}\n{commands[wanted].usage}"
        rows = [(name, commands[name].summary) for name in sorted(commands)]
        if self.output is OutputFormat.TABLE:
            return tabulate(rows, headers=["command", "usage"])
        return self._render(ResultTable(["command", "usage"], rows))


class QuitCommand(Command):
    """End the session."""

    summary = "quit: leave the shell"

    @property
    def name(self) -> str:
        return "quit"

    @property
    def _arg_spec(self) -> dict:
        return {}

    def run(self) -> str:
        self._session.running = False
        return ""


COMMANDS: Dict[str, Type[Command]] = {
    "load": LoadCommand,
    "save": SaveCommand,
    "import": ImportCommand,
    "query": QueryCommand,
    "flatten": FlattenCommand,
    "project": ProjectCommand,
    "deproject": DeprojectCommand,
    "constrain": ConstrainCommand,
    "propagate": PropagateCommand,
    "infer": InferCommand,
    "check": CheckCommand,
    "validate": ValidateCommand,
    "stats": StatsCommand,
    "concepts": ConceptsCommand,
    "cube": CubeCommand,
    "define": DefineCommand,
    "item": ItemCommand,
    "help": HelpCommand,
    "quit": QuitCommand,
}

ALIASES = {"exit": "quit", "?": "help"}

# A line opening with one of these words is a bare query.
QUERY_KEYWORDS = frozenset({"select", "from", "forall"})
