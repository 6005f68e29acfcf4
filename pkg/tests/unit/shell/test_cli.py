# Copyright: (c) 2026, comdb contributors
# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)

import pytest

from comdb.shell.cli import main

SCRIPT = """\
# flat1 walkthrough
query FROM X SELECT id, u
flatten --tsv

stats Z
project Z x.u
"""


@pytest.fixture
def flat1_args(fixtures_dir):
    return [
        "--schema",
        str(fixtures_dir / "flat1.schema"),
        "--data",
        str(fixtures_dir / "flat1.data"),
        "--format",
        "tsv",
        "--no-color",
    ]


def test_query(flat1_args, capsys):
    assert main(flat1_args + ["--query", "FROM X SELECT id"]) == 0
    out, err = capsys.readouterr()
    assert out == "id\n7\n8\n9\n"
    assert err == ""


def test_failing_query(flat1_args, capsys):
    assert main(flat1_args + ["--query", "SELECT * FROM NoSuch"]) == 1
    out, err = capsys.readouterr()
    assert out == ""
    assert err.startswith("error[UnknownConcept]: ")


def test_data_requires_schema(fixtures_dir):
    with pytest.raises(SystemExit) as exc:
        main(["--data", str(fixtures_dir / "flat1.data"), "--query", "FROM X"])
    assert exc.value.code == 2


def test_query_and_batch_are_exclusive(tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["--query", "FROM X", "--batch", str(tmp_path / "s.txt")])
    assert exc.value.code == 2


def test_invalid_environment_setting(monkeypatch):
    monkeypatch.setenv("COMDB_LOG_LEVEL", "chatty")
    with pytest.raises(SystemExit) as exc:
        main(["--query", "FROM X"])
    assert exc.value.code == 2


def test_broken_schema(tmp_path, capsys):
    schema = tmp_path / "broken.schema"
    schema.write_text("concept A {\n  x : B ;\n}\n", encoding="utf-8")
    assert main(["--schema", str(schema), "--no-color", "--query", "FROM A"]) == 1
    _, err = capsys.readouterr()
    assert err.startswith(f"error[UnknownDomain]: {schema}:1: ")


def test_batch_is_deterministic(flat1_args, tmp_path, capsys):
    script = tmp_path / "walkthrough.comdb"
    script.write_text(SCRIPT, encoding="utf-8")
    assert main(flat1_args + ["--batch", str(script)]) == 0
    first = capsys.readouterr().out
    assert main(flat1_args + ["--batch", str(script)]) == 0
    second = capsys.readouterr().out
    assert first == second
    assert first.startswith("id\tu\n7\t1\n8\t2\n9\t\n")
    assert first.endswith("U\n1\n")


def test_batch_stops_with_exit_code(flat1_args, tmp_path, capsys):
    script = tmp_path / "failing.comdb"
    script.write_text("query FROM Nowhere\nquery FROM X SELECT id\n", encoding="utf-8")
    assert main(flat1_args + ["--batch", str(script)]) == 1
    out, err = capsys.readouterr()
    assert out == ""
    assert "error[UnknownConcept]" in err


def test_missing_batch_script(tmp_path, capsys):
    assert main(["--no-color", "--batch", str(tmp_path / "none.comdb")]) == 1
    assert capsys.readouterr().err.startswith("error[StorageError]: ")


def test_color_styles_errors(flat1_args, capsys, monkeypatch):
    monkeypatch.delenv("COMDB_COLOR", raising=False)
    args = [arg for arg in flat1_args if arg != "--no-color"]
    assert main(args + ["--query", "FROM Nowhere"]) == 1
    assert capsys.readouterr().err.startswith("\033[31merror[UnknownConcept]\033[0m: ")


def test_version(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert capsys.readouterr().out.startswith("comdb ")


def test_repl_mode(flat1_args, capsys, monkeypatch):
    lines = iter(["query FROM X SELECT id", "query FROM Nowhere", "quit"])
    monkeypatch.setattr("builtins.input", lambda prompt: next(lines))
    assert main(flat1_args + ["repl"]) == 0
    out, err = capsys.readouterr()
    assert out.startswith("comdb ")
    assert "id\n7\n8\n9\n" in out
    assert err.startswith("error[UnknownConcept]: ")


def test_repl_ends_at_end_of_input(flat1_args, monkeypatch):
    def closed(prompt):
        raise EOFError

    monkeypatch.setattr("builtins.input", closed)
    assert main(flat1_args + ["repl"]) == 0


def test_repl_excludes_other_modes():
    with pytest.raises(SystemExit) as exc:
        main(["repl", "--query", "FROM X"])
    assert exc.value.code == 2
