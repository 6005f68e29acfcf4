# Copyright: (c) 2026, comdb contributors
# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)

import itertools
import random

import pytest

from comdb import errors
from comdb.model.poset import (
    Combination,
    Direction,
    OrderedSet,
    extend,
    induced_leq,
    reduce,
)

LATTICE1_COLUMNS = [
    "b.e1.e4.t",
    "b.e1.e5.t",
    "b.e2.e4.t",
    "b.e2.e6.t",
    "b.e3.e5.t",
    "b.e3.e6.t",
]


def test_combination_equality_ignores_order():
    assert Combination.of({"a": 1, "b": 2}) == Combination.of([("b", 2), ("a", 1)])
    assert hash(Combination.of({"a": 1, "b": 2})) == hash(Combination.of({"b": 2, "a": 1}))


def test_combination_rejects_repeated_label():
    with pytest.raises(errors.DuplicateLabel):
        Combination.of([("a", 1), ("a", 2)])


def test_reduce_and_extend():
    combination = Combination.of({"a": 1, "b": 2})
    assert reduce(combination, "a") == Combination.of({"b": 2})
    assert extend(reduce(combination, "a"), "a", 1) == combination
    with pytest.raises(errors.UnknownLabel):
        reduce(combination, "c")
    with pytest.raises(errors.DuplicateLabel):
        extend(combination, "b")


def test_get_unknown_label():
    with pytest.raises(errors.UnknownLabel):
        Combination.of({"a": 1}).get("z")


def test_induced_leq_null_is_most_general():
    specific = Combination.of({"a": 1, "b": 2})
    assert induced_leq(specific, Combination.of({"a": 1, "b": None}))
    assert not induced_leq(Combination.of({"a": 1, "b": None}), specific)
    assert induced_leq(specific, specific)


def test_induced_leq_requires_aligned_labels():
    with pytest.raises(errors.LabelMismatch):
        induced_leq(Combination.of({"a": 1}), Combination.of({"b": 1}))


def test_induced_leq_uses_element_order():
    poset = OrderedSet()
    poset.add_element("g")
    poset.add_element("s", Combination.of({"g": "g"}))
    assert induced_leq(Combination.of({"x": "s"}), Combination.of({"x": "g"}), poset.less_than)
    assert not induced_leq(Combination.of({"x": "g"}), Combination.of({"x": "s"}), poset.less_than)


def test_add_element_errors():
    poset = OrderedSet(top="t", bottom="b")
    poset.add_element("a")
    with pytest.raises(errors.DuplicateId):
        poset.add_element("a")
    with pytest.raises(errors.DuplicateId):
        poset.add_element("t")
    with pytest.raises(errors.UnknownSuper):
        poset.add_element("c", Combination.of({"x": "missing"}))
    with pytest.raises(errors.CycleDetected):
        poset.add_element("d", Combination.of({"x": "d"}))
    assert poset.elements == ["a"]


def test_null_binding_adds_no_edge():
    poset = OrderedSet()
    poset.add_element("a")
    poset.add_element("c", Combination.of({"x": "a", "y": None}))
    assert poset.less_than("c", "a")
    assert poset.metrics("c").dimensionality == 1


def test_less_than_is_strict(lattice1):
    assert lattice1.less_than("e3", "e6")
    assert lattice1.less_than("b", "e6")
    assert lattice1.less_than("e6", "t")
    assert not lattice1.less_than("e6", "e3")
    assert not lattice1.less_than("e1", "e6")
    assert not lattice1.less_than("e3", "e3")
    with pytest.raises(errors.UnknownElement):
        lattice1.less_than("e3", "nope")


def test_less_than_is_transitive(lattice1):
    names = lattice1.elements + ["t", "b"]
    for a, b, c in itertools.product(names, repeat=3):
        if lattice1.less_than(a, b) and lattice1.less_than(b, c):
            assert lattice1.less_than(a, c)


def test_metrics(lattice1):
    assert lattice1.metrics("b").primitive_dimensionality == 6
    assert lattice1.metrics("e3").primitive_dimensionality == 2
    assert lattice1.metrics("e6").primitive_cardinality == 2
    assert lattice1.metrics("e1").dimensionality == 2
    assert lattice1.metrics("e4").cardinality == 2
    assert lattice1.metrics("e4").canonical_dimensionality == 1
    assert lattice1.metrics("e1").canonical_dimensionality == 4


def test_enumerate_paths_up(lattice1):
    paths = lattice1.enumerate_paths("e3", Direction.UP, complete=True)
    assert [p.dotted() for p in paths] == ["e5.t", "e6.t"]
    assert all(p.rank == 2 for p in paths)
    every = lattice1.enumerate_paths("e3", Direction.UP)
    assert len(every) == 4


def test_enumerate_paths_down(lattice1):
    paths = lattice1.enumerate_paths("e6", Direction.DOWN, complete=True)
    assert [p.elements for p in paths] == [("b", "e2", "e6"), ("b", "e3", "e6")]


def test_flatten_binary_columns(lattice1):
    table = lattice1.flatten_binary()
    assert table.columns == LATTICE1_COLUMNS


def test_flatten_binary_rows(lattice1):
    table = lattice1.flatten_binary()
    assert [row.bits for row in table.rows_for("e3")] == [(0, 0, 0, 0, 1, 1)]
    assert [row.bits for row in table.rows_for("e6")] == [
        (0, 0, 0, 1, 0, 0),
        (0, 0, 0, 0, 0, 1),
    ]
    assert table.rows_for("b")[0].bits == (1,) * 6


def test_flatten_binary_row_count_matches_cardinality(lattice1):
    table = lattice1.flatten_binary()
    for element in lattice1.elements:
        assert len(table.rows_for(element)) == lattice1.metrics(element).primitive_cardinality


def test_binary_rows_follow_element_order(lattice1):
    table = lattice1.flatten_binary()
    r31 = table.combination(table.rows_for("e3")[0])
    r61, r62 = (table.combination(row) for row in table.rows_for("e6"))
    assert induced_leq(r31, r62)
    assert not induced_leq(r31, r61)
    bottom = table.combination(table.rows_for("b")[0])
    for row in table.rows:
        assert induced_leq(bottom, table.combination(row))


def test_empty_set_flattens_to_bottom_only():
    table = OrderedSet().flatten_binary()
    assert table.columns == ["bottom.top"]
    assert [row.element for row in table.rows] == ["bottom"]


def random_poset(seed):
    """Random ordered set of at most eight elements, some joined by parallel edges."""
    rng = random.Random(seed)
    poset = OrderedSet()
    for number in range(rng.randint(1, 8)):
        earlier = poset.elements
        bindings = {}
        for label in ("p", "q", "r")[: rng.randint(0, 3)]:
            bindings[label] = rng.choice(earlier) if earlier and rng.random() < 0.8 else None
        poset.add_element(f"e{number}", Combination.of(bindings))
    return poset, rng


@pytest.mark.parametrize("seed", range(50))
def test_path_counts_agree_with_enumeration(seed):
    poset, _ = random_poset(seed)
    table = poset.flatten_binary()
    for element in poset.elements + [poset.top, poset.bottom]:
        metrics = poset.metrics(element)
        up = poset.enumerate_paths(element, Direction.UP)
        down = poset.enumerate_paths(element, Direction.DOWN)
        assert metrics.canonical_dimensionality == len(up)
        assert metrics.canonical_cardinality == len(down)
        if element != poset.top:
            assert metrics.primitive_dimensionality == sum(p.target == poset.top for p in up)
        if element != poset.bottom:
            assert metrics.primitive_cardinality == sum(p.source == poset.bottom for p in down)
    assert (
        poset.metrics(poset.bottom).primitive_dimensionality
        == poset.metrics(poset.top).primitive_cardinality
        == len(table.columns)
    )


@pytest.mark.parametrize("seed", range(50))
def test_binary_rows_count_paths_both_ways(seed):
    poset, _ = random_poset(seed)
    table = poset.flatten_binary()
    for element in poset.elements:
        metrics = poset.metrics(element)
        rows = table.rows_for(element)
        assert len(rows) == metrics.primitive_cardinality
        for row in rows:
            assert sum(row.bits) == metrics.primitive_dimensionality


@pytest.mark.parametrize("seed", range(50))
def test_induced_leq_is_a_partial_order(seed):
    poset, rng = random_poset(seed)
    values = poset.elements + [None]
    labels = ("a", "b")
    combinations = {
        Combination.of({label: rng.choice(values) for label in labels}) for _ in range(12)
    }
    leq = poset.less_than
    for a in combinations:
        assert induced_leq(a, a, leq)
        for b in combinations:
            if a != b and induced_leq(a, b, leq):
                assert not induced_leq(b, a, leq)
            for c in combinations:
                if induced_leq(a, b, leq) and induced_leq(b, c, leq):
                    assert induced_leq(a, c, leq)
