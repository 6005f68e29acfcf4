# Copyright: (c) 2026, comdb contributors
# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)
"""Static types of COQL expressions.

Classes:

    Kind
    QType
    DerivedProperty

"""

from dataclasses import dataclass, field
from enum import Enum
from typing import FrozenSet, Optional, Tuple

from comdb.coql import ast


class Kind(Enum):
    ITEM = "item"
    COLLECTION = "collection"
    SCALAR = "scalar"
    TABLE = "table"
    ROW = "row"
    TUPLE = "tuple"
    ANY = "any"


@dataclass(frozen=True)
class QType:
    """Type of an expression.

    Args:
        kind (Kind): Shape of the value.
        concept (Optional[str]): Concept of an item or of collection members;
            None for collections of literals.
        columns (Tuple[Tuple[str, QType], ...]): Named columns of tables and rows.
    """

    kind: Kind
    concept: Optional[str] = None
    columns: Tuple[Tuple[str, "QType"], ...] = ()

    @classmethod
    def item(cls, concept: str) -> "QType":
        return cls(Kind.ITEM, concept)

    @classmethod
    def collection(cls, concept: Optional[str] = None) -> "QType":
        return cls(Kind.COLLECTION, concept)

    @property
    def many(self) -> bool:
        return self.kind is Kind.COLLECTION

    def column(self, name: str) -> Optional["QType"]:
        for column, qtype in self.columns:
            if column == name:
                return qtype
        return None

    def __str__(self) -> str:
        if self.kind in (Kind.ITEM, Kind.COLLECTION) and self.concept:
            return f"{self.kind.value}<{self.concept}>"
        return self.kind.value


SCALAR = QType(Kind.SCALAR)
ANY = QType(Kind.ANY)

SCALAR_TYPE_NAMES = frozenset(
    {"integer", "int", "double", "decimal", "string", "date", "boolean"}
)


@dataclass
class DerivedProperty:
    """Registered derived property of ``owner``.

    ``body`` holds resolved statements; ``calls`` names the properties the body
    invokes, as ``(owner, name)`` pairs.
    """

    owner: str
    name: str
    params: Tuple[Tuple[str, QType], ...]
    body: Tuple[ast.Stmt, ...] = ()
    result: QType = ANY
    definition: Optional[ast.PropertyDef] = None
    calls: FrozenSet[Tuple[str, str]] = field(default_factory=frozenset)

    @property
    def key(self) -> Tuple[str, str]:
        return (self.owner, self.name)
