# Copyright: (c) 2026, comdb contributors
# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)
"""Concept-oriented data model: ordered sets, schema, flattening, navigation and propagation."""

from .schema import TOP, DimPath, ItemRef, Schema, ValueType, format_path, parse_path
from .navigate import Collection

__all__ = [
    "TOP",
    "Collection",
    "DimPath",
    "ItemRef",
    "Schema",
    "ValueType",
    "format_path",
    "parse_path",
]
