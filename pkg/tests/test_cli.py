from __future__ import annotations

import csv
import io
import json

import jsonschema
import pytest

from movcone.cli import EXIT_NOT_CY, EXIT_OK, EXIT_USAGE, cone_schema, main, table_schema
from movcone.fano import CATALOG_ENV, export_catalog
from movcone.tables import TABLES


def _run(capsys, *argv) -> tuple[int, str, str]:
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_list_all_cases(capsys):
    code, out, _ = _run(capsys, "list", "--format", "csv")
    assert code == EXIT_OK
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["case", "r_M", "d_M", "rank", "#ODPs", "h21", "base"]
    assert len(rows) == 31


def test_list_by_base_shows_variants(capsys):
    code, out, _ = _run(capsys, "list", "--base", "Mu3")
    assert code == EXIT_OK
    body = [line for line in out.splitlines() if line.startswith("| Mu3")]
    assert len(body) == 1 and " / " in body[0]
    assert body[0].count("|") == 8


def test_list_json_validates(capsys):
    code, out, _ = _run(capsys, "list", "--format", "json")
    assert code == EXIT_OK
    jsonschema.validate(json.loads(out), table_schema())


@pytest.mark.parametrize("label", sorted(TABLES))
def test_every_table_renders_in_every_format(capsys, label):
    code, out, _ = _run(capsys, "table", label, "--format", "json")
    assert code == EXIT_OK
    data = json.loads(out)
    jsonschema.validate(data, table_schema())
    assert data["label"] == label
    for fmt in ("md", "csv"):
        code, text, _ = _run(capsys, "table", label, "--format", fmt)
        assert code == EXIT_OK and text.strip()


def test_table_t3_markdown(capsys):
    _, out, _ = _run(capsys, "table", "T3")
    assert "| 99 | 42 | 16 | 5 | 114 | 50 | 46 |" in out


def test_movable_json_for_every_case(capsys, all_cases):
    schema = cone_schema()
    for pair in all_cases:
        code, out, _ = _run(capsys, "movable", pair.case_id, "--format", "json", "--depth", "2")
        assert code == EXIT_OK, pair.case_id
        report = json.loads(out)
        jsonschema.validate(report, schema)
        assert report["verification"]["ok"] is True


def test_movable_markdown_and_svg(capsys, tmp_path):
    target = tmp_path / "gr.svg"
    code, out, _ = _run(capsys, "movable", "Gr24/F=1,1,1,1", "--svg", str(target))
    assert code == EXIT_OK
    assert "241 + 44√30" in out
    assert "[ -199  -176 ]\n[  770   681 ]" in out
    assert "fundamental domain: <89H - 23L, L - H>" in out
    assert target.read_text().startswith("<svg")


def test_movable_csv(capsys):
    code, out, _ = _run(capsys, "movable", "P4/F=2,1,1,1", "--format", "csv")
    assert code == EXIT_OK
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[1] == ["490H - 101L", "type_II"] and rows[-1] == ["4L - 5H", "type_II"]


def test_catalog_round_trip(capsys):
    code, out, _ = _run(capsys, "catalog")
    assert code == EXIT_OK
    assert out == export_catalog()


@pytest.mark.parametrize(
    "argv, expected",
    [
        (["movable", "P4/F=9/E=0"], EXIT_NOT_CY),
        (["movable", "P9/F=1,1"], EXIT_USAGE),
        (["movable", "P4/F=2,2/E=1,0"], EXIT_USAGE),
        (["list", "--base", "nowhere"], EXIT_USAGE),
    ],
)
def test_error_exit_codes(capsys, argv, expected):
    code, out, err = _run(capsys, *argv)
    assert code == expected
    assert out == "" and err.startswith("movcone:")


@pytest.mark.parametrize("argv", [["table", "T9"], ["movable", "P4/F=2,1,1,1", "--depth", "0"], []])
def test_argument_errors(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == EXIT_USAGE


def test_catalog_override_from_environment(capsys, tmp_path, monkeypatch):
    raw = json.loads(export_catalog())
    path = tmp_path / "cat.json"
    path.write_text(json.dumps({"bases": [b for b in raw["bases"] if b["id"] == "Mu2"]}))
    monkeypatch.setenv(CATALOG_ENV, str(path))
    code, out, _ = _run(capsys, "list", "--format", "csv")
    assert code == EXIT_OK
    assert out.count("\n") == 2

    broken = tmp_path / "broken.json"
    broken.write_text(json.dumps({"bases": "nope"}))
    monkeypatch.setenv(CATALOG_ENV, str(broken))
    code, _, err = _run(capsys, "list")
    assert code == EXIT_USAGE and "movcone:" in err
