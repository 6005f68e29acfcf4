# Copyright: (c) 2026, comdb contributors
# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)
"""comdb exception hierarchy.

Every error raised by the engine derives from ComdbError and carries a
stable ``code`` (used by the shell when reporting) and an optional location.

Classes:

    ComdbError
    OrderError, SchemaError, NavigationError, PropagationError,
    QueryError (LexError, ParseError, CheckError, EvalError), StorageError,
    ShellError (UsageError)
    and one leaf class per error code.

"""

from typing import FrozenSet, Optional


class ComdbError(Exception):
    """Base class for all comdb errors.

    Args:
        message (str): Human readable description.
        location (Optional[str]): ``file:line`` or ``line:col`` of the failure, if known.
    """

    code = "ComdbError"

    def __init__(self, message: str, location: Optional[str] = None):
        super().__init__(message)
        self.message = message
        self.location = location

    def __str__(self) -> str:
        if self.location:
            return f"{self.location}: {self.message}"
        return self.message


# Ordered sets.


class OrderError(ComdbError):
    """Labelled ordered set error."""

    code = "OrderError"


class DuplicateId(OrderError):
    """Element or item identifier already in use."""

    code = "DuplicateId"


class UnknownSuper(OrderError):
    """Combination references a super-element that does not exist."""

    code = "UnknownSuper"


class CycleDetected(OrderError):
    """Mutation would create a directed cycle."""

    code = "CycleDetected"


class DuplicateLabel(OrderError):
    """Label used twice on one source."""

    code = "DuplicateLabel"


class UnknownElement(OrderError):
    """Element is not part of the ordered set."""

    code = "UnknownElement"


class UnknownLabel(OrderError):
    """Label is not bound in the combination."""

    code = "UnknownLabel"


class LabelMismatch(OrderError):
    """Combinations compared over different label sets."""

    code = "LabelMismatch"


# Two-level schema.


class SchemaError(ComdbError):
    """Two-level model error."""

    code = "SchemaError"


class DuplicateConcept(SchemaError):
    """Concept name already defined."""

    code = "DuplicateConcept"


class UnknownConcept(SchemaError):
    """Concept is not defined."""

    code = "UnknownConcept"


class UnknownDomain(SchemaError):
    """Dimension domain is not a defined concept."""

    code = "UnknownDomain"


class DuplicateItem(SchemaError):
    """Item identifier already used in its concept."""

    code = "DuplicateItem"


class UnknownItem(SchemaError):
    """Item does not exist."""

    code = "UnknownItem"


class UnknownDimension(SchemaError):
    """Dimension is not declared on the concept."""

    code = "UnknownDimension"


class DomainViolation(SchemaError):
    """Slot value does not belong to the dimension's domain."""

    code = "DomainViolation"


class UnknownReferent(SchemaError):
    """Slot references an item that does not exist."""

    code = "UnknownReferent"


class ItemReferenced(SchemaError):
    """Item cannot be deleted while other items reference it."""

    code = "ItemReferenced"


class SchemaFrozen(SchemaError):
    """Mutation attempted on a frozen snapshot."""

    code = "SchemaFrozen"


class NoBottom(SchemaError):
    """Operation needs a bottom concept and none is designated."""

    code = "NoBottom"


class UnreachableConcept(SchemaError):
    """Concept is not reachable upward from the bottom concept.

    Warning-level: recorded and logged by flattening, never raised by it.
    """

    code = "UnreachableConcept"


# Navigation.


class NavigationError(ComdbError):
    """Projection or de-projection error."""

    code = "NavigationError"


class DomainMismatch(NavigationError):
    """Dimensions do not connect the concepts they are used between."""

    code = "DomainMismatch"


class AmbiguousDeprojection(NavigationError):
    """De-projection hop resolves to more than one concept."""

    code = "AmbiguousDeprojection"


# Constraints and inference.


class PropagationError(ComdbError):
    """Constraint or inference error."""

    code = "PropagationError"


class NonLocalPredicate(PropagationError):
    """Elementary constraint predicate looks beyond the item's own slots."""

    code = "NonLocalPredicate"


class PathMismatch(PropagationError):
    """Path does not lead between the required concepts."""

    code = "PathMismatch"


# Query language.


class QueryError(ComdbError):
    """COQL error."""

    code = "QueryError"


class LexError(QueryError):
    """Invalid character sequence in query text."""

    code = "LexError"


class ParseError(QueryError):
    """Query text does not follow the grammar.

    Args:
        message (str): Description.
        location (Optional[str]): ``line:col`` of the offending token.
        expected (FrozenSet[str]): Token kinds that would have been accepted.
    """

    code = "ParseError"

    def __init__(
        self,
        message: str,
        location: Optional[str] = None,
        expected: FrozenSet[str] = frozenset(),
    ):
        super().__init__(message, location)
        self.expected = expected

    def __str__(self) -> str:
        text = super().__str__()
        if self.expected:
            text += f" (expected one of: {', '.join(sorted(self.expected))})"
        return text


class CheckError(QueryError):
    """Static check failure."""

    code = "CheckError"


class UnboundVariable(CheckError):
    """Name is neither a variable, a dimension in scope nor a concept."""

    code = "UnboundVariable"


class TypeMismatch(CheckError):
    """Expression used where its type is not allowed."""

    code = "TypeMismatch"


class DuplicateProperty(CheckError):
    """Derived property already registered on the owner concept."""

    code = "DuplicateProperty"


class EvalError(QueryError):
    """Runtime evaluation failure."""

    code = "EvalError"


class NullNavigation(EvalError):
    """Scalar required but navigation produced null."""

    code = "NullNavigation"


class DivisionByZero(EvalError):
    """Division by zero in query arithmetic."""

    code = "DivisionByZero"


# Persistence.


class StorageError(ComdbError):
    """Schema, data or ingest file error."""

    code = "StorageError"


class FormatError(StorageError):
    """File does not follow its text format."""

    code = "ParseError"


# Shell.


class ShellError(ComdbError):
    """Command-line shell error."""

    code = "ShellError"


class UsageError(ShellError):
    """Unknown command or invalid command arguments."""

    code = "UsageError"
