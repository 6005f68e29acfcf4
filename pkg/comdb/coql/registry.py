# Copyright: (c) 2026, comdb contributors
# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)
"""Derived property registry kept on the schema."""

import logging
from typing import List, Union

from comdb import errors
from comdb.coql import ast
from comdb.coql.checker import Checker
from comdb.coql.parser import parse_definition
from comdb.coql.types import DerivedProperty
from comdb.model.schema import Schema

logger = logging.getLogger(__name__)


def register_derived(
    schema: Schema, definition: Union[str, ast.PropertyDef]
) -> DerivedProperty:
    """Check and register ``Owner::name(params) { body }``.

    Args:
        schema (Schema): Model receiving the property.
        definition (Union[str, PropertyDef]): Definition text or parsed definition.

    Raises:
        DuplicateProperty: The owner already has a property of that name.
        CheckError: The body does not check or is recursive.
    """
    if isinstance(definition, str):
        definition = parse_definition(definition)
    existing = schema.derived.get(definition.owner, {})
    if definition.name in existing:
        raise errors.DuplicateProperty(
            f"{definition.owner}::{definition.name} is already defined",
            str(definition.span),
        )
    if schema.has_concept(definition.owner):
        concept = schema.concept(definition.owner)
        if definition.name in concept.dimensions:
            raise errors.DuplicateProperty(
                f"'{definition.name}' is a dimension of '{definition.owner}'",
                str(definition.span),
            )
    prop = Checker(schema).check_definition(definition)
    schema.derived.setdefault(prop.owner, {})[prop.name] = prop
    logger.info("registered derived property %s::%s", prop.owner, prop.name)
    return prop


def derived_properties(schema: Schema) -> List[DerivedProperty]:
    return [
        prop
        for owner in sorted(schema.derived)
        for _, prop in sorted(schema.derived[owner].items())
    ]
