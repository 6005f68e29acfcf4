# Copyright: (c) 2026, comdb contributors
# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)

import shutil
from pathlib import Path

import pytest

from comdb import errors, storage
from comdb.model.flatten import flatten, render_tsv
from comdb.model.schema import ItemRef
from comdb.storage import IngestMap, dumps_data, ingest_csv, ingest_files, load_ingest_map
from comdb.storage.ingest import load_order

OLAP1 = Path(__file__).resolve().parents[2] / "fixtures" / "olap1"

CREATED = {
    "Countries": 4,
    "Categories": 3,
    "Customers": 5,
    "Products": 5,
    "Orders": 8,
    "OrderParts": 12,
}


@pytest.fixture
def empty_olap1():
    return storage.load(OLAP1 / "olap1.schema")


@pytest.fixture
def olap1_copy(tmp_path):
    target = tmp_path / "olap1"
    shutil.copytree(OLAP1, target)
    return target


def test_ingest_matches_hand_written_data(empty_olap1, olap1):
    report = ingest_files(empty_olap1, OLAP1 / "olap1_map.yml")
    assert {t.concept: t.created for t in report.tables} == CREATED
    assert report.rejected == 0
    assert dumps_data(empty_olap1) == dumps_data(olap1)
    assert sorted(render_tsv(empty_olap1, flatten(empty_olap1)).splitlines()) == sorted(
        render_tsv(olap1, flatten(olap1)).splitlines()
    )


def test_tables_load_super_concepts_first(empty_olap1):
    ingest_map = load_ingest_map(OLAP1 / "olap1_map.yml")
    reversed_map = IngestMap(tables=list(reversed(ingest_map.tables)))
    report = ingest_csv(empty_olap1, reversed_map, OLAP1)
    assert [t.concept for t in report.tables] == [
        "Categories",
        "Products",
        "Countries",
        "Customers",
        "Orders",
        "OrderParts",
    ]
    assert report.created == sum(CREATED.values())


def test_load_order_keeps_a_valid_map_order(empty_olap1):
    ingest_map = load_ingest_map(OLAP1 / "olap1_map.yml")
    ordered = [t.concept for t in load_order(empty_olap1, ingest_map)]
    assert ordered == [t.concept for t in ingest_map.tables]
    report = ingest_csv(empty_olap1, ingest_map, OLAP1)
    assert [t.concept for t in report.tables] == ordered


def test_rejected_row_leaves_no_new_values(empty_olap1, olap1_copy, monkeypatch):
    add_item = empty_olap1.add_item

    def refuse_order_parts(concept, item_id, slots=None):
        if concept == "OrderParts" and item_id == "x9":
            raise errors.DomainViolation("refused")
        return add_item(concept, item_id, slots)

    monkeypatch.setattr(empty_olap1, "add_item", refuse_order_parts)
    with (olap1_copy / "orderparts.csv").open("a", encoding="utf-8") as handle:
        handle.write("x9,o1,p1,99.99\n")
    report = ingest_files(empty_olap1, olap1_copy / "olap1_map.yml")
    parts = next(t for t in report.tables if t.concept == "OrderParts")
    assert (parts.created, parts.rejected) == (12, 1)
    assert empty_olap1.find_value("Prices", "99.99") is None


def test_reingest_changes_nothing(empty_olap1):
    ingest_files(empty_olap1, OLAP1 / "olap1_map.yml")
    before = dumps_data(empty_olap1)
    report = ingest_files(empty_olap1, OLAP1 / "olap1_map.yml")
    assert report.created == 0
    assert report.unchanged == sum(CREATED.values())
    assert dumps_data(empty_olap1) == before


def test_unknown_foreign_key_rejects_the_row(empty_olap1, olap1_copy):
    with (olap1_copy / "customers.csv").open("a", encoding="utf-8") as handle:
        handle.write("k6,Fiona,zz\n")
    report = ingest_files(empty_olap1, olap1_copy / "olap1_map.yml")
    customers = next(t for t in report.tables if t.concept == "Customers")
    assert customers.created == 5
    assert customers.rejected == 1
    assert customers.errors[0].startswith("customers.csv:7: UnknownReferent")
    assert not empty_olap1.has_item(ItemRef("Customers", "k6"))


def test_conflicting_reingest_is_rejected(empty_olap1, olap1_copy):
    ingest_files(empty_olap1, olap1_copy / "olap1_map.yml")
    (olap1_copy / "countries.csv").write_text("key,code\nde,XX\nfr,FR\n", encoding="utf-8")
    report = ingest_files(empty_olap1, olap1_copy / "olap1_map.yml")
    countries = next(t for t in report.tables if t.concept == "Countries")
    assert (countries.unchanged, countries.rejected) == (1, 1)
    assert "DuplicateItem" in countries.errors[0]


def test_bad_rows_are_collected(empty_olap1, olap1_copy):
    (olap1_copy / "orderparts.csv").write_text(
        "key,order,product,price\nx1,o1,p1,cheap\nx2,o1,p1,1.00\nx2,o1,p1,2.00\n,o1,p1,1.00\n",
        encoding="utf-8",
    )
    report = ingest_files(empty_olap1, olap1_copy / "olap1_map.yml")
    parts = next(t for t in report.tables if t.concept == "OrderParts")
    assert (parts.created, parts.rejected) == (1, 3)
    assert [e.split(":")[2].strip() for e in parts.errors] == [
        "DomainViolation",
        "DuplicateItem",
        "DomainViolation",
    ]


def test_missing_column(empty_olap1, olap1_copy):
    (olap1_copy / "products.csv").write_text("key,name\np1,Coffee\n", encoding="utf-8")
    with pytest.raises(errors.FormatError) as exc:
        ingest_files(empty_olap1, olap1_copy / "olap1_map.yml")
    assert "category" in exc.value.message


def test_value_concept_table(empty_olap1, tmp_path):
    (tmp_path / "codes.csv").write_text("code\nAT\nDE\n", encoding="utf-8")
    (tmp_path / "map.yml").write_text(
        "tables:\n  - file: codes.csv\n    concept: Codes\n    value: code\n", encoding="utf-8"
    )
    report = ingest_files(empty_olap1, tmp_path / "map.yml")
    assert report.created == 2
    assert empty_olap1.find_value("Codes", "AT") is not None


@pytest.mark.parametrize(
    "table, error",
    [
        ({"file": "x.csv", "concept": "Nowhere", "key": "key"}, errors.UnknownConcept),
        ({"file": "x.csv", "concept": "Codes"}, errors.DomainViolation),
        ({"file": "x.csv", "concept": "Customers"}, errors.DomainViolation),
        (
            {"file": "x.csv", "concept": "Customers", "key": "key", "columns": {"c": "country"}},
            errors.DomainViolation,
        ),
        (
            {"file": "x.csv", "concept": "Customers", "key": "key", "references": {"n": "name"}},
            errors.DomainViolation,
        ),
        (
            {"file": "x.csv", "concept": "Customers", "key": "key", "columns": {"n": "nick"}},
            errors.UnknownDimension,
        ),
    ],
)
def test_invalid_map(empty_olap1, table, error):
    with pytest.raises(error):
        ingest_csv(empty_olap1, IngestMap(tables=[table]), OLAP1)


def test_invalid_map_file(tmp_path):
    (tmp_path / "map.yml").write_text("tables:\n  - concept: Codes\n", encoding="utf-8")
    with pytest.raises(errors.FormatError):
        load_ingest_map(tmp_path / "map.yml")
    (tmp_path / "broken.yml").write_text("tables: [\n", encoding="utf-8")
    with pytest.raises(errors.FormatError):
        load_ingest_map(tmp_path / "broken.yml")


def test_missing_map_file(empty_olap1, tmp_path):
    with pytest.raises(errors.StorageError) as exc:
        ingest_files(empty_olap1, tmp_path / "nowhere.yml")
    assert exc.value.location == str(tmp_path / "nowhere.yml")
