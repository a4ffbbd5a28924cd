from __future__ import annotations

from fractions import Fraction
from math import gcd

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from movcone.errors import NotCalabiYauError, ProfileInconsistencyError
from movcone.exact import Mat2, QuadExt
from movcone.fano import SplitPair, base_by_id, find_case
from movcone.invariants import (
    E_SIDE,
    F_SIDE,
    CurveClass,
    DivClass,
    H,
    HodgeData,
    L,
    cube,
    cubic_eval,
    exceptional_class,
    flop_update,
    hodge,
    nef_wall,
    octic_double_cover_nodes,
    orient,
    profile,
    rr_h0,
    surface_invariants,
)

BORDIGA = "P4/F=2,1,1,1"
QUINTIC = "P4/F=1,1,1,1,1"

small = st.integers(-6, 6)
classes = st.builds(DivClass, small, small)


def test_divisor_arithmetic_and_text():
    g = L - H
    assert g == DivClass(1, -1)
    assert str(5 * H - L) == "5H - L"
    assert str(DivClass(-101, 490)) == "490H - 101L"
    assert str(DivClass(4, -5)) == "4L - 5H"
    assert str(DivClass(-4, 10 + QuadExt.sqrt(30))) == "-4L + (10 + √30)H"
    assert str(L) == "L" and str(-H) == "-H"
    assert DivClass(4, -6).primitive() == DivClass(2, -3)
    assert not DivClass(0, 0)
    assert DivClass(Fraction(1, 2), 1).is_integral() is False
    assert L.pushforward(Mat2(((-1, 0), (5, 1)))) == DivClass(-1, 5)


def test_curve_class_must_be_primitive():
    assert CurveClass(1, 1).dot(L - 2 * H) == -1
    with pytest.raises(ValueError):
        CurveClass(2, 4)


def test_profile_examples():
    assert profile(find_case(BORDIGA)).row == (99, 42, 16, 5, 114, 50, 46)
    assert profile(find_case("P4/F=2,2,1")).row == (129, 49, 17, 5, 126, 50, 44)
    assert profile(find_case("Gr24/F=1,1,1,1")).row == (70, 40, 20, 8, 100, 56, 40)
    assert profile(find_case(BORDIGA), E_SIDE).cubic == (2, 7, 9, 5)
    assert profile(find_case(BORDIGA), E_SIDE).basis_labels == ("L_E", "H_E")
    with pytest.raises(NotCalabiYauError):
        profile(SplitPair(base_by_id("P4"), (1, 1), (0, 0)))
    with pytest.raises(ValueError):
        profile(find_case(BORDIGA), "sideways")


def test_profile_invariants_on_every_case(all_cases):
    for pair in all_cases:
        for side in (F_SIDE, E_SIDE):
            p = profile(pair, side)
            assert all(v.denominator == 1 for v in (*p.cubic, *p.c2_form))
            assert p.cubic[3] == pair.base.index * pair.base.degree


def test_cubic_eval_examples():
    t1 = profile(find_case("P4/F=2,1,1/E=1,0,0"))
    assert cube(t1, L - H) == 12
    assert cube(profile(find_case(BORDIGA)), L - H) == 99 - 3 * 42 + 3 * 16 - 5 == 16
    assert cubic_eval(t1, DivClass(0, 0), L, H) == 0


@settings(max_examples=200, deadline=None)
@given(classes, classes, classes, st.sampled_from([BORDIGA, QUINTIC, "Gr24/F=2,2", "Mu7/F=1,1"]))
def test_cubic_eval_is_symmetric_and_rebase_is_invertible(a, b, c, case):
    p = profile(find_case(case))
    value = cubic_eval(p, a, b, c)
    assert value == cubic_eval(p, b, c, a) == cubic_eval(p, c, b, a)
    m = Mat2(((2, 1), (1, 1)))
    back = p.rebase(m).rebase(m.inverse())
    assert back.same_forms(p)
    assert cube(p.rebase(m), a) == cube(p, a.pushforward(m))


def test_hodge_examples(all_cases):
    assert hodge(find_case(QUINTIC)) == HodgeData(2, 52, -100)
    assert hodge(find_case("Mu2/F=1,1")) == HodgeData(2, 128, -252)
    assert hodge(find_case("P4/F=3,1/E=1,0")) == HodgeData(2, 78, -152)
    for pair in all_cases:
        h = hodge(pair)
        assert h.euler == pair.base.chi_anticanonical + 2 * profile(pair).odp
    with pytest.raises(ProfileInconsistencyError):
        HodgeData(2, 50, 0)


def test_riemann_roch():
    p = profile(find_case(BORDIGA))
    assert rr_h0(p, L - H) == 8
    assert rr_h0(p, 2 * (L - H)) == 32
    assert rr_h0(p, DivClass(0, 0)) == 0


def test_flop_update_examples():
    p = profile(find_case("P4/F=2,2,1"))
    g = L - 2 * H
    after = flop_update(p, CurveClass(1, 1), 1)
    assert (cube(p, g), p.c2(g)) == (-1, 26)
    assert (cube(after, g), after.c2(g)) == (0, 24)

    q = profile(find_case(QUINTIC))
    assert q.cubic == (70, 35, 15, 5)
    flopped = flop_update(q, CurveClass(1, 1), 50)
    assert cube(flopped, L) == 20
    assert cube(profile(find_case(QUINTIC), E_SIDE), DivClass(-1, 5)) == 20

    assert flop_update(p, CurveClass(1, 0), 0) == p
    with pytest.raises(ValueError):
        flop_update(p, CurveClass(1, 0), -1)


@settings(max_examples=200, deadline=None)
@given(classes, st.integers(-3, 3), st.integers(-3, 3), st.integers(0, 60))
def test_flop_update_shifts_cube_and_c2(d, cl, ch, count):
    assume(gcd(cl, ch) == 1)
    c = CurveClass(cl, ch)
    p = profile(find_case(BORDIGA))
    q = flop_update(p, c, count)
    assert cube(q, d) == cube(p, d) - count * c.dot(d) ** 3
    assert q.c2(d) == p.c2(d) + 2 * count * c.dot(d)


def test_surface_invariants_examples():
    s = surface_invariants(find_case("P4/F=3,1/E=1,0"))
    assert (s.exc_class, s.KS_sq, s.surface_id) == (L - 3 * H, 8, "P1xP1")
    s = surface_invariants(find_case("P4/F=3,1,1"))
    assert (s.KS_sq, s.surface_id, s.KS_dot_fiber) == (8, "F1", -2)
    s = surface_invariants(find_case(BORDIGA))
    assert (s.KS_sq, s.surface_id) == (-1, "P2 blown up in 10 points")
    s = surface_invariants(find_case("P4/F=2,2,1"))
    assert s.surface_id == "K3 blown up in 1 point"
    for d in (2, 3, 4, 5):
        assert surface_invariants(find_case(f"dP{d}/F=2,1")).KS_sq == d
    with pytest.raises(ValueError):
        surface_invariants(find_case(QUINTIC))


def test_exceptional_and_nef_classes():
    pair = find_case("P4/F=2,1,1/E=1,0,0")
    assert exceptional_class(pair) == L - 2 * H
    assert nef_wall(pair) == L - H
    assert exceptional_class(pair, E_SIDE) == L - H
    assert nef_wall(pair, E_SIDE) == L


def test_octic_double_cover():
    assert octic_double_cover_nodes(-108) == 94
    assert octic_double_cover_nodes(-296) == 0
    with pytest.raises(ProfileInconsistencyError):
        octic_double_cover_nodes(-297)
    with pytest.raises(ProfileInconsistencyError):
        octic_double_cover_nodes(-400)


def test_orient():
    assert orient(H.vec, (L - H).vec) < 0
    assert orient((L - H).vec, H.vec) > 0
    assert orient(L.vec, L.vec) == 0
    r3 = QuadExt.sqrt(3)
    assert orient(DivClass(-1, 3 + r3).vec, H.vec) < 0
