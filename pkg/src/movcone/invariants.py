"""Numerical invariants of a marked minimal model with Picard number two.

A model is known through its cubic form on ``N^1 = <L, H>`` (stored as the
four monomials ``L^3, L^2 H, L H^2, H^3``), the linear form ``D -> c2.D`` and
the node count of the determinantal contraction it came from.  Everything
else here, whether Hodge numbers, Riemann-Roch counts, exceptional surfaces
or the effect of a flop, is evaluated from those numbers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence, Union

from .chern import E_MINUS_FDUAL, F_MINUS_EDUAL, odp_count, virtual_chern
from .errors import ProfileInconsistencyError
from .exact import Mat2, QuadExt, as_fraction, det2, format_quad
from .fano import SplitPair, require_cy

F_SIDE, E_SIDE = "F_side", "E_side"
Coeff = Union[Fraction, QuadExt]


def _coeff(x) -> Coeff:
    return x if isinstance(x, QuadExt) and not x.is_rational else as_fraction(x)


def _term(c: Coeff, sym: str) -> str:
    if isinstance(c, QuadExt):
        return f"({format_quad(c.a, c.b, c.d)}){sym}"
    if c == 1:
        return sym
    if c == -1:
        return "-" + sym
    return f"{c}{sym}"


@dataclass(frozen=True)
class DivClass:
    """A divisor class ``L_coeff * L + H_coeff * H``."""

    coeff_L: Coeff
    coeff_H: Coeff

    def __post_init__(self):
        object.__setattr__(self, "coeff_L", _coeff(self.coeff_L))
        object.__setattr__(self, "coeff_H", _coeff(self.coeff_H))

    @property
    def vec(self) -> tuple[Coeff, Coeff]:
        return (self.coeff_L, self.coeff_H)

    def __add__(self, other: "DivClass") -> "DivClass":
        return DivClass(self.coeff_L + other.coeff_L, self.coeff_H + other.coeff_H)

    def __sub__(self, other: "DivClass") -> "DivClass":
        return DivClass(self.coeff_L - other.coeff_L, self.coeff_H - other.coeff_H)

    def __neg__(self) -> "DivClass":
        return DivClass(-self.coeff_L, -self.coeff_H)

    def __mul__(self, k) -> "DivClass":
        return DivClass(self.coeff_L * k, self.coeff_H * k)

    __rmul__ = __mul__

    def __bool__(self):
        return bool(self.coeff_L) or bool(self.coeff_H)

    def is_integral(self) -> bool:
        return all(isinstance(c, Fraction) and c.denominator == 1 for c in self.vec)

    def primitive(self) -> "DivClass":
        """Positive rational multiple with coprime integer coefficients."""
        if any(isinstance(c, QuadExt) for c in self.vec):
            raise ValueError("primitive() needs rational coefficients")
        den = self.coeff_L.denominator * self.coeff_H.denominator
        a, b = int(self.coeff_L * den), int(self.coeff_H * den)
        g = gcd(a, b) or 1
        return DivClass(a // g, b // g)

    def pushforward(self, m: Mat2) -> "DivClass":
        return DivClass(*m.apply(self.vec))

    def __str__(self):
        lc, hc = self.coeff_L, self.coeff_H
        if not lc and not hc:
            return "0"
        if not lc:
            return _term(hc, "H")
        if not hc:
            return _term(lc, "L")
        first, second = (lc, "L"), (hc, "H")
        # lead with the positive rational term, as in "5H - L"
        if isinstance(lc, Fraction) and isinstance(hc, Fraction) and lc < 0 < hc:
            first, second = second, first
        head = _term(*first)
        tail = _term(*second)
        if tail.startswith("-"):
            return f"{head} - {tail[1:]}"
        return f"{head} + {tail}"

    def to_json(self):
        return [_json_coeff(c) for c in self.vec]


def _json_coeff(c: Coeff):
    if isinstance(c, QuadExt):
        return c.to_json()
    return int(c) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


L = DivClass(1, 0)
H = DivClass(0, 1)


@dataclass(frozen=True)
class CurveClass:
    """A curve class recorded by its degrees against ``L`` and ``H``."""

    pairing_with_L: int
    pairing_with_H: int

    def __post_init__(self):
        if gcd(self.pairing_with_L, self.pairing_with_H) != 1:
            raise ValueError("curve class must be primitive")

    def dot(self, d: DivClass) -> Coeff:
        return d.coeff_L * self.pairing_with_L + d.coeff_H * self.pairing_with_H


@dataclass(frozen=True)
class NumericalProfile:
    cubic: tuple[Fraction, Fraction, Fraction, Fraction]
    c2_form: tuple[Fraction, Fraction]
    odp: int = 0
    basis_labels: tuple[str, str] = ("L", "H")

    def __post_init__(self):
        object.__setattr__(self, "cubic", tuple(as_fraction(x) for x in self.cubic))
        object.__setattr__(self, "c2_form", tuple(as_fraction(x) for x in self.c2_form))

    @property
    def row(self) -> tuple[int, ...]:
        """Table layout: ``L^3, L^2H, LH^2, H^3, L.c2, H.c2, #nodes``."""
        values = (*self.cubic, *self.c2_form)
        if any(v.denominator != 1 for v in values):
            raise ProfileInconsistencyError("profile has non-integral entries")
        return tuple(int(v) for v in values) + (self.odp,)

    def c2(self, d: DivClass) -> Coeff:
        return d.coeff_L * self.c2_form[0] + d.coeff_H * self.c2_form[1]

    def rebase(self, m: Mat2, labels: tuple[str, str] | None = None) -> "NumericalProfile":
        """The same forms written in the basis given by the columns of ``m``."""
        e1, e2 = DivClass(*m.column(0)), DivClass(*m.column(1))
        cubic = (
            cubic_eval(self, e1, e1, e1),
            cubic_eval(self, e1, e1, e2),
            cubic_eval(self, e1, e2, e2),
            cubic_eval(self, e2, e2, e2),
        )
        return NumericalProfile(cubic, (self.c2(e1), self.c2(e2)), self.odp, labels or m.domain)

    def same_forms(self, other: "NumericalProfile") -> bool:
        return self.cubic == other.cubic and self.c2_form == other.c2_form

    def to_json(self) -> dict:
        return {
            "cubic": [_json_coeff(c) for c in self.cubic],
            "c2": [_json_coeff(c) for c in self.c2_form],
            "odp": self.odp,
            "basis": list(self.basis_labels),
        }


def cubic_eval(p: NumericalProfile, d1: DivClass, d2: DivClass, d3: DivClass):
    """Symmetric trilinear extension of the cubic form."""
    (x1, y1), (x2, y2), (x3, y3) = d1.vec, d2.vec, d3.vec
    lll, llh, lhh, hhh = p.cubic
    return (
        x1 * x2 * x3 * lll
        + (x1 * x2 * y3 + x1 * y2 * x3 + y1 * x2 * x3) * llh
        + (x1 * y2 * y3 + y1 * x2 * y3 + y1 * y2 * x3) * lhh
        + y1 * y2 * y3 * hhh
    )


def cube(p: NumericalProfile, d: DivClass):
    return cubic_eval(p, d, d, d)


def profile(pair: SplitPair, side: str = F_SIDE) -> NumericalProfile:
    """Cubic and ``c2`` forms of the zero locus in ``P(F)`` (or in ``P(E)``)."""
    require_cy(pair)
    if side == F_SIDE:
        c = virtual_chern(pair, E_MINUS_FDUAL)
    elif side == E_SIDE:
        c = virtual_chern(pair, F_MINUS_EDUAL)
    else:
        raise ValueError(f"unknown side {side!r}")
    d, c2m = pair.base.degree, pair.base.c2_pairing
    nodes = odp_count(pair)
    cubic = tuple(d * c[4 - k] for k in range(4))
    c2_form = (c2m * c[2] - nodes, c2m * c[1])
    labels = ("L", "H") if side == F_SIDE else ("L_E", "H_E")
    return NumericalProfile(cubic, c2_form, nodes, labels)


@dataclass(frozen=True)
class HodgeData:
    h11: int
    h21: int
    euler: int

    def __post_init__(self):
        if self.euler != 2 * (self.h11 - self.h21):
            raise ProfileInconsistencyError("Euler number disagrees with Hodge numbers")


def hodge(pair: SplitPair) -> HodgeData:
    """Hodge numbers via the smoothing of the nodal determinantal model.

    The relative Picard number of the small contraction is taken to be 1.
    """
    require_cy(pair)
    nodes = odp_count(pair)
    h21_smooth = 1 - pair.base.chi_anticanonical // 2
    h21 = h21_smooth - nodes + 1
    data = HodgeData(2, h21, 2 * (2 - h21))
    if data.euler != pair.base.chi_anticanonical + 2 * nodes:
        raise ProfileInconsistencyError(f"{pair.case_id}: smoothing relation fails")
    return data


def rr_h0(p: NumericalProfile, d: DivClass) -> Fraction:
    """``D^3/6 + c2.D/12``, the Riemann-Roch count of sections of a nef ``D``."""
    return Fraction(cube(p, d)) / 6 + Fraction(p.c2(d)) / 12


def flop_update(p: NumericalProfile, c: CurveClass, count: int) -> NumericalProfile:
    """Forms after flopping ``count`` disjoint ``(-1,-1)``-curves of class ``c``.

    ``D^3`` drops by ``count (D.C)^3`` and ``c2.D`` rises by ``2 count (D.C)``.
    """
    if count < 0:
        raise ValueError("curve count must be nonnegative")
    cl, ch = c.pairing_with_L, c.pairing_with_H
    lll, llh, lhh, hhh = p.cubic
    cubic = (
        lll - count * cl**3,
        llh - count * cl * cl * ch,
        lhh - count * cl * ch * ch,
        hhh - count * ch**3,
    )
    c2 = (p.c2_form[0] + 2 * count * cl, p.c2_form[1] + 2 * count * ch)
    return NumericalProfile(cubic, c2, p.odp, p.basis_labels)


@dataclass(frozen=True)
class SurfaceData:
    exc_class: DivClass
    KS_sq: Fraction
    KS_dot_H: Fraction
    surface_id: str
    KS_dot_fiber: Fraction | None = None
    extra: dict = field(default_factory=dict)


def exceptional_class(pair: SplitPair, side: str = F_SIDE) -> DivClass:
    """``L - (max twist) H`` on the chosen side."""
    twists = pair.f_twists if side == F_SIDE else pair.e_twists
    return DivClass(1, -max(twists))


def nef_wall(pair: SplitPair, side: str = F_SIDE) -> DivClass:
    """The non-``H`` edge of the nef cone: ``L - (min twist) H``."""
    twists = pair.f_twists if side == F_SIDE else pair.e_twists
    return DivClass(1, -min(twists))


def _del_pezzo_name(k2: int, index: int) -> str:
    if k2 == 9:
        return "P2"
    if k2 == 8:
        return "P1xP1" if index == 2 else "F1"
    return f"dP{k2}"


def surface_invariants(pair: SplitPair, side: str = F_SIDE) -> SurfaceData:
    """Invariants of the surface swept out by the degeneracy of ``F -> F_-``."""
    require_cy(pair)
    twists = pair.f_twists if side == F_SIDE else pair.e_twists
    if max(twists) == min(twists):
        raise ValueError(f"{pair.case_id}: twists are all equal on the {side}")
    p = profile(pair, side)
    s = exceptional_class(pair, side)
    k2 = cube(p, s)
    ks_h = cubic_eval(p, s, s, H)
    rank = pair.rank
    a = max(twists)
    if rank == 2:
        b = min(twists)
        other = pair.e_twists if side == F_SIDE else pair.f_twists
        c = max(other) - min(other)
        r, d = pair.base.index, pair.base.degree
        if side == E_SIDE:
            # swap to the normalised pair (E(1), F(-1)) before using the closed form
            a, b = a + 1, b + 1
        closed = (a - b) ** 2 * ((a + b) * (a + b + c) - a * (b + r)) * d
        if closed != k2:
            raise ProfileInconsistencyError(f"{pair.case_id}: K_S^2 closed form {closed} != {k2}")
        index = a - b
        if ks_h != -k2 / index:
            raise ProfileInconsistencyError(f"{pair.case_id}: K_S.H disagrees with the Fano index")
        return SurfaceData(s, k2, ks_h, _del_pezzo_name(int(k2), index), extra={"fano_index": index})
    g = nef_wall(pair, side)
    ks_fiber = cubic_eval(p, g, s, s)
    low = min(twists)
    top_count = twists.count(a)
    if top_count == 1 and all(t == low for t in twists if t != a):
        if rank == 3 and a - low == 1:
            if k2 != pair.base.degree:
                raise ProfileInconsistencyError(f"{pair.case_id}: expected K_S^2 = d_M, got {k2}")
            return SurfaceData(s, k2, ks_h, f"P2 blown up in {9 - pair.base.degree} points", ks_fiber)
        if rank == 3 and a - low == 2 and k2 == 8:
            return SurfaceData(s, k2, ks_h, "F1", ks_fiber)
        if rank == 4 and a - low == 1:
            return SurfaceData(s, k2, ks_h, f"P2 blown up in {9 - int(k2)} points", ks_fiber)
    if rank == 3 and top_count == 2 and a - low == 1 and k2 == -1:
        return SurfaceData(s, k2, ks_h, "K3 blown up in 1 point", ks_fiber)
    raise ValueError(f"{pair.case_id}: no surface identification for twists {twists}")


def octic_double_cover_nodes(euler_small: int, branch_degree: int = 8) -> int:
    """Nodes of a double cover of ``P^3`` from the Euler number of its small resolution.

    A smooth double cover branched along a degree-``e`` surface has Euler
    number ``2 * 4 - chi(surface)`` with ``chi = e^3 - 4e^2 + 6e``; each node
    accounts for a difference of 2.
    """
    e = branch_degree
    chi_branch = e**3 - 4 * e**2 + 6 * e
    chi_smooth = 2 * 4 - chi_branch
    diff = euler_small - chi_smooth
    if diff % 2 or diff < 0:
        raise ProfileInconsistencyError("Euler difference is not twice a node count")
    return diff // 2


def orient(u: Sequence, v: Sequence) -> int:
    """Sign of the orientation determinant; negative means ``u`` lies left of ``v``."""
    value = det2(u, v)
    if isinstance(value, QuadExt):
        return value.sign()
    return (value > 0) - (value < 0)
