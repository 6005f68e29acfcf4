# Copyright: (c) 2026, comdb contributors
# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)
"""Shared fixtures: file-based models, the seeded order model and random models."""

import random
from decimal import Decimal
from pathlib import Path

import pytest

from comdb import storage
from comdb.model.schema import ItemRef, Schema

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
OLAP1 = FIXTURES / "olap1"

CATEGORIES = ["pizza", "pasta", "salad", "soup"]
YEARS = ["2005", "2006", "2007"]
PRICES = ["4.50", "6.00", "7.25", "8.90", "12.00"]


def load_fixture(name: str) -> Schema:
    data = FIXTURES / f"{name}.data"
    return storage.load(FIXTURES / f"{name}.schema", data if data.exists() else None)


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def flat1() -> Schema:
    return load_fixture("flat1")


@pytest.fixture
def nav1() -> Schema:
    return load_fixture("nav1")


@pytest.fixture
def md1() -> Schema:
    return load_fixture("md1")


@pytest.fixture
def down1() -> Schema:
    return load_fixture("down1")


@pytest.fixture
def inf1() -> Schema:
    return load_fixture("inf1")


@pytest.fixture
def olap1() -> Schema:
    return storage.load(OLAP1 / "olap1.schema", OLAP1 / "olap1.data")


@pytest.fixture
def lattice1():
    return storage.load_poset(FIXTURES / "lattice1.poset")


@pytest.fixture
def twins() -> Schema:
    """``A`` and ``B`` both own a dimension ``x`` over ``S``; only ``A`` leads on to ``T``."""
    schema = Schema("twins")
    schema.define_concepts(
        [
            ("S", [], None),
            ("A", [("x", "S")], None),
            ("B", [("x", "S")], None),
            ("T", [("y", "A")], None),
        ]
    )
    schema.add_item("S", "s1")
    schema.add_item("A", "a1", {"x": ItemRef("S", "s1")})
    schema.add_item("B", "b1", {"x": ItemRef("S", "s1")})
    schema.add_item("T", "t1", {"y": ItemRef("A", "a1")})
    return schema


def build_group1(seed: int = 2006) -> Schema:
    """Employees, their orders and the dishes ordered, generated from ``seed``."""
    rng = random.Random(seed)
    schema = Schema("group1")
    schema.define_concepts(
        [
            ("Names", [], "string"),
            ("Ages", [], "int"),
            ("Dates", [], "string"),
            ("Prices", [], "decimal"),
            ("Counts", [], "int"),
            ("Categories", [], None),
            ("Employees", [("name", "Names"), ("age", "Ages")], None),
            (
                "Dishes",
                [("name", "Names"), ("category", "Categories"), ("price", "Prices")],
                None,
            ),
            ("Orders", [("employee", "Employees"), ("date", "Dates")], None),
            (
                "OrderParts",
                [("order", "Orders"), ("dish", "Dishes"), ("count", "Counts")],
                None,
            ),
        ]
    )
    schema.designate_bottom("OrderParts")
    for category in CATEGORIES:
        schema.add_item("Categories", category)
    for number in range(1, 31):
        schema.add_item(
            "Employees",
            f"e{number:02d}",
            {
                "name": schema.ensure_value("Names", f"emp{number:02d}"),
                "age": schema.ensure_value("Ages", rng.randint(20, 60)),
            },
        )
    # Five of the twelve dishes are pizzas.
    dish_categories = ["pizza"] * 5 + [rng.choice(CATEGORIES[1:]) for _ in range(7)]
    for number, category in enumerate(dish_categories, start=1):
        schema.add_item(
            "Dishes",
            f"d{number:02d}",
            {
                "name": schema.ensure_value("Names", f"dish{number:02d}"),
                "category": ItemRef("Categories", category),
                "price": schema.ensure_value("Prices", Decimal(rng.choice(PRICES))),
            },
        )
    for number in range(1, 151):
        schema.add_item(
            "Orders",
            f"o{number:03d}",
            {
                "employee": ItemRef("Employees", f"e{rng.randint(1, 30):02d}"),
                "date": schema.ensure_value("Dates", rng.choice(YEARS)),
            },
        )
    for number in range(1, 501):
        schema.add_item(
            "OrderParts",
            f"p{number:03d}",
            {
                "order": ItemRef("Orders", f"o{rng.randint(1, 150):03d}"),
                "dish": ItemRef("Dishes", f"d{rng.randint(1, 12):02d}"),
                "count": schema.ensure_value("Counts", rng.randint(1, 3)),
            },
        )
    return schema


@pytest.fixture(scope="session")
def group1_master() -> Schema:
    return build_group1()


@pytest.fixture
def group1(group1_master) -> Schema:
    return group1_master.snapshot()


def random_model(seed: int) -> Schema:
    """Layered entity model: primitives, a middle layer and a designated bottom ``Z``.

    Every concept holds two to four items and about a fifth of the slots are null.
    """
    rng = random.Random(seed)
    schema = Schema(f"random{seed}")
    layers = []
    for number in range(rng.randint(1, 3)):
        layers.append((f"P{number}", []))
    for number in range(rng.randint(1, 4)):
        earlier = [name for name, _ in layers]
        domains = rng.sample(earlier, k=min(len(earlier), rng.randint(1, 2)))
        layers.append((f"M{number}", [(f"to{domain.lower()}", domain) for domain in domains]))
    earlier = [name for name, _ in layers]
    domains = rng.sample(earlier, k=min(len(earlier), rng.randint(2, 3)))
    layers.append(("Z", [(f"to{domain.lower()}", domain) for domain in domains]))
    schema.define_concepts([(name, dims, None) for name, dims in layers])
    schema.designate_bottom("Z")
    for name, dims in layers:
        for number in range(rng.randint(2, 4)):
            slots = {}
            for label, domain in dims:
                if rng.random() < 0.2:
                    slots[label] = None
                else:
                    slots[label] = rng.choice(schema.item_refs(domain))
            schema.add_item(name, f"{name.lower()}_{number}", slots)
    return schema


DEFAULT_SEEDS = 12


def pytest_generate_tests(metafunc):
    if "random_schema" in metafunc.fixturenames:
        marker = metafunc.definition.get_closest_marker("seeds")
        count = marker.args[0] if marker else DEFAULT_SEEDS
        metafunc.parametrize(
            "random_schema", range(count), indirect=True, ids=lambda seed: f"seed{seed}"
        )


@pytest.fixture
def random_schema(request) -> Schema:
    return random_model(request.param)


@pytest.fixture
def rng(request) -> random.Random:
    return random.Random(request.node.name)
