from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources

import pytest

from movcone.errors import CatalogError, NotCalabiYauError, UnknownCaseError
from movcone.fano import (
    CATALOG_ENV,
    SplitPair,
    base_by_id,
    catalog,
    check_base,
    cy_condition,
    enumerate_cases,
    export_catalog,
    find_case,
    load_catalog,
    parse_case_id,
)


def test_catalog_contents():
    ids = [b.id for b in catalog()]
    assert ids[:2] == ["P4", "Gr24"]
    assert [i for i in ids if i.startswith("dP")] == ["dP2", "dP3", "dP4", "dP5"]
    assert [i for i in ids if i.startswith("Mu")] == [f"Mu{g}" for g in range(2, 11)]
    assert base_by_id("Mu6").genus == 6
    assert base_by_id("P4").genus is None


def test_packaged_json_matches_builtin_table():
    path = resources.files("movcone").joinpath("data/fano.json")
    assert load_catalog(str(path)) == catalog()


def test_every_base_passes_consistency_checks():
    for base in catalog():
        check_base(base)
        assert base.c1_c3.denominator == 1
        assert base.h21_anticanonical == 1 - base.chi_anticanonical // 2


def test_section_count_consistency():
    for base in catalog():
        r, d = base.index, base.degree
        if base.family == "del_pezzo":
            assert base.c2_pairing == 2 * d + 12
            assert base.section_count() == Fraction(d * (r - 1), 2) + 3
        if base.family == "mukai":
            assert base.c2_pairing == d + 24
            assert base.section_count() == Fraction(d, 2) + 4


def test_enumeration():
    cases = enumerate_cases()
    assert len(cases) == 30
    assert len({c.case_id for c in cases}) == 30
    assert all(cy_condition(c) for c in cases)
    by_base = {}
    for c in cases:
        by_base.setdefault(c.base.id, []).append(c)
    assert len(by_base["P4"]) == 8 and len(by_base["Gr24"]) == 5
    assert all(len(by_base[f"Mu{g}"]) == 1 for g in range(2, 11))


def test_case_id_round_trip():
    for pair in enumerate_cases():
        assert parse_case_id(pair.case_id) == pair
        assert find_case(pair.case_id) is not None
    assert find_case("P4/F=1,1,2,1") == find_case("P4/F=2,1,1,1/E=0,0,0,0")
    assert find_case(" Gr24 / F = 2,1 / E = 1,0 ").case_id == "Gr24/F=2,1/E=1,0"


def test_swapped_pair_reverses_roles():
    pair = find_case("P4/F=3,1/E=1,0")
    assert pair.swapped() == SplitPair(pair.base, (2, 1), (2, 0))
    assert pair.swapped().swapped() == pair


@pytest.mark.parametrize(
    "text, error",
    [
        ("P4/F=9/E=0", NotCalabiYauError),
        ("P4/F=3,1,1/E=1,0,0", NotCalabiYauError),
        ("P4/F=5,0", NotCalabiYauError),
        ("P4/F=2,2/E=1,0", UnknownCaseError),
        ("P9/F=1,1", UnknownCaseError),
        ("P4/F=", UnknownCaseError),
        ("garbage", UnknownCaseError),
    ],
)
def test_bad_case_ids(text, error):
    with pytest.raises(error):
        find_case(text)


def test_bad_catalog_file_is_rejected(tmp_path):
    path = tmp_path / "cat.json"
    path.write_text(json.dumps({"bases": [{"id": "X", "index": 3}]}))
    with pytest.raises(CatalogError):
        load_catalog(path)

    raw = json.loads(export_catalog())
    broken = [b for b in raw["bases"] if b["id"] == "dP3"]
    broken[0]["c2_pairing"] = 19
    path.write_text(json.dumps({"bases": broken}))
    with pytest.raises(CatalogError, match="2d\\+12"):
        load_catalog(path)


def test_catalog_from_environment(tmp_path, monkeypatch):
    raw = json.loads(export_catalog())
    path = tmp_path / "small.json"
    path.write_text(json.dumps({"bases": [b for b in raw["bases"] if b["id"] in ("P4", "Mu5")]}))
    monkeypatch.setenv(CATALOG_ENV, str(path))
    assert [b.id for b in catalog()] == ["P4", "Mu5"]
    assert len(enumerate_cases()) == 9
    with pytest.raises(UnknownCaseError):
        find_case("Gr24/F=2,2")
