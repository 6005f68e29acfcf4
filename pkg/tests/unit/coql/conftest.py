# Copyright: (c) 2026, comdb contributors
# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)
"""Query corpus shared by the parser and evaluator tests."""

import pytest

GROUP1_QUERIES = {
    "star": "SELECT * FROM Employees",
    "above_average_age": (
        "SELECT e.name FROM Employees e WHERE e.age > AVERAGE(SELECT age FROM Employees)"
    ),
    "pairs": (
        "FROM (Employees e, Categories c) "
        "WHERE COUNT(e <- employee <- order <- (OrderParts | dish.category == c)) > 5 "
        "SELECT (e.name, c.id)"
    ),
    "forall": (
        "FORALL (Employees e, Categories c) {\n"
        "  Integer n = COUNT(e <- employee <- order <- (OrderParts | dish.category == c));\n"
        "  IF (n > 5) RETURN (e.name, c.id, n);\n"
        "}"
    ),
    "pizza": (
        "FROM Employees e "
        "WHERE COUNT(e <- employee <- order <- "
        "(OrderParts | order.date == '2006' AND dish.category == 'pizza')) > 3 "
        "SELECT e.name"
    ),
    "pizza_total": (
        "FROM Employees e {\n"
        "  Collection group = e <- employee <- order <- "
        "(OrderParts | order.date == '2006' AND dish.category == 'pizza');\n"
        "  double total = SUM(group.<count * dish.price>);\n"
        "}\n"
        "WHERE COUNT(group) > 3 AND total < 200\n"
        "SELECT e.name, total"
    ),
    "pizza_return": (
        "from Employees e {\n"
        "  Collection group = e <- employee <- order <- "
        "(OrderParts | order.date = '2006' and dish.category = 'pizza');\n"
        "  Decimal total = SUM(group.<count * dish.price>);\n"
        "  if (COUNT(group) > 3 AND total < 200) then return (e.name, total);\n"
        "}"
    ),
    "pizza_subquery": (
        "FROM Employees e {\n"
        "  -- one row per pizza order part of 2006\n"
        "  Collection group = FROM OrderParts op\n"
        "    WHERE op.order.employee == e AND op.order.date == '2006'\n"
        "      AND op.dish.category == 'pizza'\n"
        "    SELECT op.count * op.dish.price;\n"
        "}\n"
        "WHERE COUNT(group) > 3 AND SUM(group) < 200\n"
        "SELECT e.name, SUM(group) AS total"
    ),
    "two_groups": (
        "FROM Employees e {\n"
        "  Collection group = e <- employee <- order <- "
        "(OrderParts | order.date == '2006' AND dish.category == 'pizza');\n"
        "  Collection group2 = e <- employee <- (Orders | date == '2007');\n"
        "}\n"
        "WHERE COUNT(group) > 3 AND COUNT(group2) > 2\n"
        "SELECT e.name"
    ),
    "zigzag": (
        "FROM Employees e {\n"
        "  Collection group = e <- employee <- order <- (OrderParts | order.date == '2006')\n"
        "    -> dish -> category <- category <- dish <- (OrderParts | order.date == '2007')\n"
        "    -> order -> employee;\n"
        "}\n"
        "WHERE COUNT(group) > 10\n"
        "SELECT e.name, COUNT(group) AS colleagues"
    ),
    "busy_days": "FROM (OrderParts | COUNT(order.date <- date <- Orders) > 50) SELECT id",
}


def pytest_generate_tests(metafunc):
    names = sorted(GROUP1_QUERIES)
    if "group1_query" in metafunc.fixturenames:
        metafunc.parametrize(
            "group1_query", [GROUP1_QUERIES[name] for name in names], ids=names
        )
    if "group1_query_name" in metafunc.fixturenames:
        metafunc.parametrize("group1_query_name", names)


@pytest.fixture
def group1_queries():
    return dict(GROUP1_QUERIES)
