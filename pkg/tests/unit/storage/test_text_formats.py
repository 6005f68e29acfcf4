# Copyright: (c) 2026, comdb contributors
# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)

import pytest

from comdb import errors, storage
from comdb.model.schema import ItemRef, Schema
from comdb.storage import dumps_data, dumps_poset, dumps_schema, loads_data, loads_poset, loads_schema

FIXTURE_NAMES = ["flat1", "nav1", "md1", "down1", "inf1"]


def reload(schema):
    copy = loads_schema(dumps_schema(schema))
    return loads_data(copy, dumps_data(schema))


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_save_load_is_a_fixpoint(fixtures_dir, name):
    schema = storage.load(fixtures_dir / f"{name}.schema", fixtures_dir / f"{name}.data")
    again = reload(schema)
    assert dumps_schema(again) == dumps_schema(schema)
    assert dumps_data(again) == dumps_data(schema)
    assert again.bottom == schema.bottom


def test_order_model_survives_a_round_trip(group1):
    again = reload(group1)
    assert dumps_data(again) == dumps_data(group1)
    assert again.count_items() == group1.count_items()


def test_save_and_load_files(flat1, tmp_path):
    storage.save(flat1, tmp_path / "m.schema", tmp_path / "m.data")
    again = storage.load(tmp_path / "m.schema", tmp_path / "m.data")
    assert dumps_data(again) == dumps_data(flat1)


def test_missing_file(tmp_path):
    with pytest.raises(errors.StorageError) as exc:
        storage.load(tmp_path / "nowhere.schema")
    assert exc.value.location == str(tmp_path / "nowhere.schema")


def test_canonical_schema_text(flat1):
    text = dumps_schema(flat1)
    assert text.splitlines()[0] == "concept U value int { }"
    assert "concept Z {\n  x : X ;\n  y : Y ;\n}" in text
    assert text.endswith("bottom Z ;\n")


def test_canonical_data_text(flat1):
    lines = dumps_data(flat1).splitlines()
    assert "value U 1" in lines
    assert "item X 7 { u = 1, v = 3, w = null }" in lines


def test_strings_and_decimals_are_quoted_as_needed():
    schema = Schema()
    schema.define_concept("Labels", value_type="string")
    schema.define_concept("Prices", value_type="decimal")
    schema.add_value("Labels", "it's here")
    schema.add_value("Prices", "4.50")
    text = dumps_data(schema)
    assert "value Labels 'it''s here'" in text
    assert "value Prices 4.50" in text
    again = loads_data(loads_schema(dumps_schema(schema)), text)
    assert again.find_value("Labels", "it's here") is not None


def test_entries_load_in_any_order(fixtures_dir):
    schema = storage.load(fixtures_dir / "flat1.schema")
    loads_data(schema, "item Z 20 { x = 7 }\nitem X 7 { u = 1 }\nvalue U 1\n")
    assert schema.walk(ItemRef("Z", "20"), "x.u") == ItemRef("U", "1")


@pytest.mark.parametrize(
    "text, error, location",
    [
        ("concept A {\n  x : B ;\n}", errors.UnknownDomain, "s:1"),
        ("concept A { }\nconcept A { }", errors.DuplicateConcept, "s:2"),
        ("concept A value float { }", errors.FormatError, "s:1"),
        ("concept A { }\n\nbottom Q ;", errors.UnknownConcept, "s:3"),
        ("concept A { }\nentity B { }", errors.FormatError, "s:2"),
        ("concept A { b : B ; }\nconcept B { a : A ; }", errors.CycleDetected, "s"),
        ("concept A { x B }", errors.FormatError, "s:1"),
    ],
)
def test_schema_errors(text, error, location):
    with pytest.raises(error) as exc:
        loads_schema(text, "s")
    assert exc.value.location == location


@pytest.mark.parametrize(
    "text, error, location",
    [
        ("value U 1\n\nitem Z 20 { x = 99 }", errors.UnknownReferent, "d:3"),
        ("item Q 1 { }", errors.UnknownConcept, "d:1"),
        ("value U null", errors.FormatError, "d:1"),
        ("item X 7 { u = 1,\n u = 2 }", errors.DuplicateLabel, "d:2"),
        ("value U 'abc'", errors.DomainViolation, "d:1"),
        ("item X 30 { q = 1 }", errors.UnknownDimension, "d:1"),
        ("item X 30 { u = 1 }\nitem X 30 { }", errors.DuplicateItem, "d:2"),
        ("items X 30 { }", errors.FormatError, "d:1"),
    ],
)
def test_data_errors(fixtures_dir, text, error, location):
    schema = storage.load(fixtures_dir / "flat1.schema")
    with pytest.raises(error) as exc:
        loads_data(schema, text, "d")
    assert exc.value.location == location


def test_poset_round_trip(lattice1):
    text = dumps_poset(lattice1)
    assert dumps_poset(loads_poset(text)) == text
    assert "element e1 { e4 : e4 ; e5 : e5 ; }" in text.splitlines()
    assert "element e4 { }" in text.splitlines()


@pytest.mark.parametrize(
    "text, error, location",
    [
        ("element a { x : b ; }", errors.UnknownSuper, "p:1"),
        ("element a { }\nelement a { }", errors.DuplicateId, "p:2"),
        ("element a { x : b ; }\nelement b { y : a ; }", errors.CycleDetected, "p"),
        ("top a ;\nelement a { }", errors.DuplicateId, "p:2"),
        ("node a { }", errors.FormatError, "p:1"),
    ],
)
def test_poset_errors(text, error, location):
    with pytest.raises(error) as exc:
        loads_poset(text, "p")
    assert exc.value.location == location
