# Copyright: (c) 2026, comdb contributors
# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)
"""Persistence: schema and data text files, ordered-set fixtures and CSV ingest."""

import logging
from pathlib import Path
from typing import Optional, Union

from comdb import errors
from comdb.model.schema import Schema
from comdb.storage.data_file import dumps_data, loads_data
from comdb.storage.ingest import IngestMap, IngestReport, ingest_csv, ingest_files, load_ingest_map
from comdb.storage.poset_file import dumps_poset, loads_poset
from comdb.storage.schema_file import dumps_schema, loads_schema

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def _read(path: PathLike) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise errors.StorageError(f"cannot read file: {exc.strerror}", str(path)) from exc


def load(schema_path: PathLike, data_path: Optional[PathLike] = None) -> Schema:
    """Load a schema file and, optionally, a data file.

    Raises:
        ComdbError: Any format or integrity error, located as ``file:line``.
    """
    schema = loads_schema(_read(schema_path), str(schema_path))
    if data_path is not None:
        loads_data(schema, _read(data_path), str(data_path))
    return schema


def save(schema: Schema, schema_path: PathLike, data_path: Optional[PathLike] = None):
    """Write the canonical schema text and, optionally, the data text."""
    Path(schema_path).write_text(dumps_schema(schema), encoding="utf-8")
    if data_path is not None:
        Path(data_path).write_text(dumps_data(schema), encoding="utf-8")
    logger.info("saved %s (%d items)", schema_path, schema.count_items())


def load_poset(path: PathLike):
    return loads_poset(_read(path), str(path))


__all__ = [
    "IngestMap",
    "IngestReport",
    "dumps_data",
    "dumps_poset",
    "dumps_schema",
    "ingest_csv",
    "ingest_files",
    "load",
    "load_ingest_map",
    "load_poset",
    "loads_data",
    "loads_poset",
    "loads_schema",
    "save",
]
