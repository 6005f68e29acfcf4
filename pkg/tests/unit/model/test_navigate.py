# Copyright: (c) 2026, comdb contributors
# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)

import random

import pytest

from comdb import errors
from comdb.model.navigate import (
    Collection,
    PathStep,
    ReverseIndex,
    deproject,
    deproject_path,
    dot,
    eval_path,
    full_deproject,
    multi_deproject,
    multi_project,
    project,
    resolve_deprojection,
)
from comdb.model.schema import ItemRef, Schema


def refs(concept, *ids):
    return Collection(concept, [ItemRef(concept, i) for i in ids])


def test_project(nav1):
    assert project(nav1, Collection.of_concept(nav1, "C"), "d").ids() == ["2", "3"]
    assert project(nav1, Collection.of_concept(nav1, "F"), "f.d").ids() == ["3"]


def test_project_empty_path_is_identity(nav1):
    source = Collection.of_concept(nav1, "C")
    assert project(nav1, source, "") == source


def test_dot_keeps_duplicates(nav1):
    result = dot(nav1, Collection.of_concept(nav1, "F"), "f.d")
    assert result.collection.ids() == ["3", "3", "3"]
    assert result.collection.concept == "D"
    assert result.dropped == 0


def test_project_then_dot(nav1):
    above = project(nav1, Collection.of_concept(nav1, "F"), "f")
    assert above.ids() == ["i2", "i3"]
    assert dot(nav1, above, "d").collection.ids() == ["3", "3"]


def test_dot_counts_null_walks(inf1):
    result = dot(inf1, Collection.of_concept(inf1, "Z"), "x")
    assert len(result.collection) == 4
    assert result.dropped == 1


def test_deproject(nav1):
    result = deproject(nav1, Collection.of_concept(nav1, "C"), "f", "F")
    assert result.ids() == ["4", "5", "6"]
    assert deproject(nav1, refs("C", "i1"), "f", "F").ids() == []


def test_deproject_two_hops(nav1):
    result = deproject(nav1, refs("D", "2", "3"), ["d", "f"], "F")
    assert result.ids() == ["4", "5", "6"]


def test_deproject_into_a_restricted_target(nav1):
    result = deproject(nav1, refs("D", "3"), ["d", "f"], refs("F", "5", "9"))
    assert result.ids() == ["5"]


def test_deproject_errors(nav1):
    with pytest.raises(errors.DomainMismatch):
        deproject(nav1, refs("D", "3"), ["f"], "F")
    with pytest.raises(errors.UnknownDimension):
        deproject(nav1, refs("D", "3"), ["nope"], "F")
    with pytest.raises(errors.DomainMismatch):
        deproject(nav1, Collection(None, [1, 2]), ["d"], "C")


def test_resolve_deprojection(nav1):
    assert resolve_deprojection(nav1, "D", ["d", "f"], "F") == ["C", "F"]
    assert resolve_deprojection(nav1, "C", [], "C") == []


def test_zigzag(nav1):
    steps = [
        PathStep.up("f.d"),
        PathStep.down(["d", "f"], "F"),
        PathStep.up("f.d"),
    ]
    start = refs("F", "4")
    assert eval_path(nav1, start, steps[:1]).ids() == ["3"]
    assert eval_path(nav1, start, steps[:2]).ids() == ["4", "5", "6"]
    assert eval_path(nav1, start, steps).ids() == ["3"]


def test_eval_path_dot_step(nav1):
    result = eval_path(nav1, Collection.of_concept(nav1, "F"), [PathStep.dot("f")])
    assert result.ids() == ["i2", "i3", "i3"]


def test_multi_project(md1):
    assert multi_project(md1, Collection.of_concept(md1, "P"), ["a", "b"]).ids() == ["q1"]


def test_multi_deproject(md1):
    result = multi_deproject(md1, refs("Q", "q1"), ["a", "b"], "P")
    assert result.ids() == ["p1"]
    assert multi_deproject(md1, refs("Q", "q1"), ["a"], "P").ids() == ["p1", "p2"]


def test_multi_project_domain_mismatch(flat1):
    with pytest.raises(errors.DomainMismatch):
        multi_project(flat1, Collection.of_concept(flat1, "X"), ["u", "v"])


def test_full_deproject(flat1):
    result = full_deproject(flat1, refs("V", "3"))
    assert result.ids() == ["12", "13"]
    assert full_deproject(flat1, refs("X", "8")).ids() == []
    assert full_deproject(flat1, Collection("X", [])).ids() == []


def test_deproject_path(flat1):
    result = deproject_path(flat1, refs("V", "3"), "Z", "y.v")
    assert result.ids() == ["12"]
    with pytest.raises(errors.PathMismatch):
        deproject_path(flat1, refs("V", "3"), "Z", "y.w")


def test_index_agrees_with_scan(random_schema):
    index = ReverseIndex(random_schema)
    for name, concept in random_schema.concepts.items():
        for dim, decl in concept.dimensions.items():
            source = Collection.of_concept(random_schema, decl.domain)
            scanned = deproject(random_schema, source, [dim], name)
            indexed = deproject(random_schema, source, [dim], name, index)
            assert set(scanned) == set(indexed)


def test_project_and_deproject_are_adjoint(random_schema):
    for name, concept in random_schema.concepts.items():
        items = Collection.of_concept(random_schema, name)
        for dim, decl in concept.dimensions.items():
            above = project(random_schema, items, dim)
            below = deproject(random_schema, above, [dim], name)
            assert set(below) == {
                ref for ref in items if random_schema.get_slot(ref, dim) is not None
            }
            assert set(project(random_schema, below, dim)) == set(above)
            domain = Collection.of_concept(random_schema, decl.domain)
            referenced = project(random_schema, deproject(random_schema, domain, [dim], name), dim)
            assert set(referenced) <= set(domain)


def test_ambiguous_intermediate_hop(twins):
    with pytest.raises(errors.AmbiguousDeprojection):
        resolve_deprojection(twins, "S", ["x", "y"], "T")
    with pytest.raises(errors.AmbiguousDeprojection):
        deproject(twins, refs("S", "s1"), ["x", "y"], "T")
    assert resolve_deprojection(twins, "S", ["x"], "B") == ["B"]


def test_named_intermediate_concept_resolves_the_ambiguity(twins):
    steps = [PathStep.down(["x"], "A"), PathStep.down(["y"], "T")]
    assert eval_path(twins, refs("S", "s1"), steps).ids() == ["t1"]


def test_deproject_last_hop_must_reach_the_target(twins):
    with pytest.raises(errors.DomainMismatch):
        resolve_deprojection(twins, "S", ["x"], "T")


def random_steps(schema, concept, rng, count):
    """Up to ``count`` valid project, dot and single-hop de-project steps from ``concept``."""
    steps = []
    for _ in range(count):
        choices = []
        for label, decl in sorted(schema.concept(concept).dimensions.items()):
            choices.append((PathStep.up(label), decl.domain))
            choices.append((PathStep.dot(label), decl.domain))
        for owner, definition in sorted(schema.concepts.items()):
            for label, decl in sorted(definition.dimensions.items()):
                if decl.domain == concept:
                    choices.append((PathStep.down([label], owner), owner))
        if not choices:
            break
        step, concept = rng.choice(choices)
        steps.append(step)
    return steps


@pytest.mark.seeds(100)
def test_eval_path_splits_anywhere(random_schema, rng):
    start = rng.choice(sorted(random_schema.concepts))
    source = Collection.of_concept(random_schema, start)
    steps = random_steps(random_schema, start, rng, 5)
    whole = eval_path(random_schema, source, steps)
    for split in range(len(steps) + 1):
        head = eval_path(random_schema, source, steps[:split])
        assert eval_path(random_schema, head, steps[split:]) == whole


@pytest.mark.seeds(100)
def test_projection_steps_merge_into_one_path(random_schema, rng):
    bottom = random_schema.require_bottom()
    source = Collection.of_concept(random_schema, bottom)
    for path in random_schema.concept_paths(bottom):
        stepwise = eval_path(random_schema, source, [PathStep.up(label) for label in path])
        assert eval_path(random_schema, source, [PathStep.up(path)]) == stepwise


def shared_domain_model(rng):
    schema = Schema("shared")
    schema.define_concepts(
        [("D", [], None), ("P", [("a", "D"), ("b", "D"), ("c", "D")], None)]
    )
    for number in range(5):
        schema.add_item("D", f"d{number}")
    domain = schema.item_refs("D")
    for number in range(rng.randint(1, 10)):
        slots = {
            label: None if rng.random() < 0.2 else rng.choice(domain) for label in "abc"
        }
        schema.add_item("P", f"p{number}", slots)
    return schema


@pytest.mark.parametrize("seed", range(50))
def test_multi_project_is_an_intersection(seed):
    rng = random.Random(seed)
    schema = shared_domain_model(rng)
    members = schema.item_refs("P")
    source = Collection("P", rng.sample(members, k=rng.randint(1, len(members))))
    dims = rng.sample("abc", k=rng.randint(1, 3))
    expected = {
        ref
        for ref in schema.item_refs("D")
        if all(any(schema.get_slot(m, dim) == ref for m in source) for dim in dims)
    }
    assert set(multi_project(schema, source, dims)) == expected
