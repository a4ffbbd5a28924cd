from __future__ import annotations

import xml.etree.ElementTree as ET

import jsonschema
import pytest

from movcone.chambers import (
    DETERMINANTAL,
    DOUBLE_COVER_SMALL,
    ELLIPTIC_FIBRATION,
    FINITE,
    INFINITE,
    K3_FIBRATION,
    TYPE_I,
    TYPE_II,
    TYPE_III,
    Model,
    classify_wall,
    nef_cone,
    verify_cone_conjecture,
)
from movcone.cli import cone_schema, movable_report
from movcone.errors import ChamberVerificationError, UnrecognizedFibrationError
from movcone.exact import Mat2, QuadExt
from movcone.fano import find_case
from movcone.invariants import F_SIDE, DivClass, H, L, NumericalProfile, cube, profile
from movcone.svg import cone_svg

QUINTIC = "P4/F=1,1,1,1,1/E=0,0,0,0,0"
BORDIGA = "P4/F=2,1,1,1/E=0,0,0,0"
GR24 = "Gr24/F=1,1,1,1/E=0,0,0,0"
P4_221 = "P4/F=2,2,1/E=0,0,0"


def _model(case: str) -> Model:
    pair = find_case(case)
    return Model("X_F", profile(pair), Mat2.identity(), nef_cone(pair), F_SIDE)


def _walls(mc) -> list[tuple[str, str]]:
    return [(str(w.divisor), w.kind) for w in mc.all_walls]


def test_nef_cone_examples():
    assert nef_cone(find_case("P4/F=3,2")) == (H, L - 2 * H)
    assert nef_cone(find_case("P4/F=2,1,1,1")) == (H, L - H)
    assert nef_cone(find_case("Gr24/F=1,1,1,1")) == (H, L - H)


def test_classify_wall_examples():
    w = classify_wall(_model(P4_221), L - H, L - 2 * H)
    assert w.kind == TYPE_I and w.data["G2S"] == 8
    w = classify_wall(_model("Gr24/F=2,1,1"), L - H, L - 2 * H)
    assert w.kind == TYPE_III and (w.data["G2S"], w.data["GS2"]) == (0, -2)
    w = classify_wall(_model("P4/F=4,1"), L - H, L - 4 * H)
    assert w.kind == TYPE_II and (w.data["G3"], w.data["G2S"], w.data["GS2"]) == (144, 0, 0)
    w = classify_wall(_model("Mu5/F=1,1"), L - H)
    assert w.kind == K3_FIBRATION and w.data["c2G"] == 24


def test_classify_wall_errors():
    with pytest.raises(ChamberVerificationError):
        classify_wall(_model(BORDIGA), L - 2 * H)
    odd = Model("Y", NumericalProfile((0, 0, 0, 1), (30, 0)), Mat2.identity(), (H, L), "test")
    with pytest.raises(UnrecognizedFibrationError):
        classify_wall(odd, L)


def test_model_validation():
    p = profile(find_case(BORDIGA))
    with pytest.raises(ChamberVerificationError):
        Model("bad", p, Mat2(((2, 0), (0, 1))), (H, L - H), "test")
    with pytest.raises(ChamberVerificationError):
        Model("bad", p, Mat2.identity(), (L - H, H), "test")
    with pytest.raises(ChamberVerificationError):
        Model("bad", p, Mat2.identity(), (2 * H, L - H), "test")


def test_bordiga_cone(cones):
    mc = cones[BORDIGA]
    assert mc.finiteness == FINITE
    assert [m.id for m in mc.models] == ["X_E", "X_F", "X_F+"]
    assert _walls(mc) == [
        ("490H - 101L", TYPE_II), ("5H - L", TYPE_I), ("H", DETERMINANTAL), ("L - H", TYPE_I), ("4L - 5H", TYPE_II),
    ]
    double = mc.all_walls[1]
    assert double.data[DOUBLE_COVER_SMALL] and double.data["odp"] == 94
    assert double.data["matrix"].as_int_rows() == [[1, 7], [0, -1]]
    flop = mc.all_walls[3]
    assert flop.data["count"] == 10 and flop.data["curve"].dot(L) == 1
    assert mc.mirror(mc.walls[-1].divisor) == DivClass(-101, 490)
    plus = mc.models[2].marked
    assert plus.row == (89, 32, 6, -5, 134, 70, 10)


def test_221_cone(cones):
    mc = cones[P4_221]
    assert _walls(mc) == [
        ("5H - L", ELLIPTIC_FIBRATION), ("H", DETERMINANTAL), ("L - H", TYPE_I), ("L - 2H", K3_FIBRATION),
    ]
    plus = mc.models[-1].marked
    assert cube(plus, L - 2 * H) == 0 and plus.c2(L - 2 * H) == 24


def test_quintic_cone(cones):
    mc = cones[QUINTIC]
    assert mc.finiteness == INFINITE
    assert _walls(mc) == [("5H - L", TYPE_I), ("H", DETERMINANTAL), ("L - H", TYPE_I), ("4L - 5H", TYPE_I)]
    assert mc.generator.pullback.as_int_rows() == [[-19, -15], [90, 71]]
    g = mc.generator.pullback
    assert DivClass(*g.apply(mc.walls[-1].divisor.vec)) == mc.walls[0].divisor


def test_gr24_cone(cones):
    mc = cones[GR24]
    assert mc.fundamental_domain == (DivClass(-23, 89), L - H)
    assert [str(w.divisor) for w in mc.walls] == ["89H - 23L", "31H - 8L", "4H - L", "H", "L - H"]
    assert len(mc.chambers) == 4
    r30 = QuadExt.sqrt(30)
    assert mc.boundary == (DivClass(-4, 10 + r30), DivClass(4, -10 + r30))


def test_two_chamber_cases(cones):
    for case_id, mc in cones.items():
        if case_id in (QUINTIC, BORDIGA, GR24, P4_221):
            continue
        assert mc.finiteness == FINITE
        assert [m.id for m in mc.models] == ["X_E", "X_F"]
        left, mid, right = mc.walls
        assert mid.kind == DETERMINANTAL and mid.divisor == H
        assert not left.small and not right.small
    assert _walls(cones["Mu5/F=1,1/E=0,0"]) == [("2H - L", K3_FIBRATION), ("H", DETERMINANTAL), ("L - H", K3_FIBRATION)]


def test_every_model_is_consistent_with_its_marking(cones):
    for mc in cones.values():
        for chamber in mc.chambers:
            m = chamber.model
            assert {chamber.left.divisor, chamber.right.divisor} == set(m.nef_generators)
            for g in m.nef_generators:
                # nef generators have nonnegative cube on their own model
                assert cube(m.marked, g) >= 0


@pytest.mark.parametrize("depth", [1, 20])
def test_verification_reports(cones, depth):
    for mc in cones.values():
        report = verify_cone_conjecture(mc, depth)
        assert report["ok"] is True
        if mc.finiteness == INFINITE:
            assert report["translates"] == 2 * depth + 1
    with pytest.raises(ValueError):
        verify_cone_conjecture(cones[GR24], 0)


def test_reports_validate_against_schema(cones):
    schema = cone_schema()
    for mc in cones.values():
        jsonschema.validate(movable_report(mc, 3), schema)


def test_svg_is_well_formed(cones):
    for case_id in (QUINTIC, BORDIGA, GR24, "Mu2/F=1,1/E=0,0"):
        root = ET.fromstring(cone_svg(cones[case_id]))
        assert root.tag.endswith("svg")
        texts = [t.text for t in root.iter() if t.tag.endswith("text")]
        assert case_id in texts
