"""Chern and Segre classes of split and virtual bundles, truncated at degree 4.

Every class lives in the span of ``1, H, H^2, H^3, H^4`` for the fundamental
divisor ``H`` of the base, so a total class is five rational coefficients.
The degree-4 coefficient is integrated by multiplying with ``H^4 = d``; that
multiplication happens only when a number is produced, never in storage.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import prod
from typing import Sequence

from .errors import MalformedCaseError
from .exact import as_fraction, fraction_text
from .fano import SplitPair, require_cy

TOP = 4
CHERN, SEGRE = "chern", "segre"
F_MINUS_EDUAL, E_MINUS_FDUAL = "F_minus_Edual", "E_minus_Fdual"


@dataclass(frozen=True)
class ChernVector:
    coeffs: tuple[Fraction, ...]
    kind: str = CHERN

    def __post_init__(self):
        c = tuple(as_fraction(x) for x in self.coeffs)
        c = (c + (Fraction(0),) * (TOP + 1))[: TOP + 1]
        if c[0] != 1:
            raise ValueError("a total Chern or Segre class starts with 1")
        object.__setattr__(self, "coeffs", c)

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k]

    def __iter__(self):
        return iter(self.coeffs)

    def __mul__(self, other: "ChernVector") -> "ChernVector":
        return ChernVector(convolve(self.coeffs, other.coeffs), CHERN)

    def dual(self) -> "ChernVector":
        return ChernVector(tuple((-1) ** k * c for k, c in enumerate(self.coeffs)), self.kind)

    def inverse(self) -> "ChernVector":
        """Multiplicative inverse as a truncated power series."""
        return ChernVector(series_inverse(self.coeffs), SEGRE if self.kind == CHERN else CHERN)

    def to_json(self) -> list[str]:
        return [fraction_text(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, items: Sequence[str], kind: str = CHERN) -> "ChernVector":
        return cls(tuple(Fraction(x) for x in items), kind)


def convolve(a: Sequence[Fraction], b: Sequence[Fraction]) -> tuple[Fraction, ...]:
    return tuple(sum((a[i] * b[k - i] for i in range(k + 1)), Fraction(0)) for k in range(TOP + 1))


def series_inverse(c: Sequence[Fraction]) -> tuple[Fraction, ...]:
    out = [Fraction(1)]
    for k in range(1, TOP + 1):
        out.append(-sum((c[i] * out[k - i] for i in range(1, k + 1)), Fraction(0)))
    return tuple(out)


def chern_split(twists: Sequence[int]) -> ChernVector:
    """Total Chern class of ``(+) O(a_i)``: elementary symmetric functions."""
    coeffs = [Fraction(sum(prod(s) for s in combinations(twists, k))) for k in range(TOP + 1)]
    return ChernVector(tuple(coeffs), CHERN)


def segre_dual(cv: ChernVector) -> ChernVector:
    """``s(B^dual)`` from ``c(B)`` by the closed degree-4 formulas."""
    if cv.kind != CHERN:
        raise ValueError("segre_dual expects a Chern class")
    _, c1, c2, c3, c4 = cv.coeffs
    s = (
        1,
        c1,
        c1**2 - c2,
        c1**3 - 2 * c1 * c2 + c3,
        c1**4 - 3 * c1**2 * c2 + 2 * c1 * c3 + c2**2 - c4,
    )
    return ChernVector(s, SEGRE)


def virtual_chern(pair: SplitPair, direction: str) -> ChernVector:
    """``c(F - E^dual)`` or ``c(E - F^dual)`` by convolving with a dual Segre class."""
    cf, ce = chern_split(pair.f_twists), chern_split(pair.e_twists)
    if direction == F_MINUS_EDUAL:
        return cf * segre_dual(ce)
    if direction == E_MINUS_FDUAL:
        return ce * segre_dual(cf)
    raise ValueError(f"unknown direction {direction!r}")


def odp_count(pair: SplitPair) -> int:
    """Number of nodes of the determinantal hypersurface, ``d (c2^2 - c1 c3)``."""
    require_cy(pair)
    c = virtual_chern(pair, F_MINUS_EDUAL)
    value = pair.base.degree * (c[2] ** 2 - c[1] * c[3])
    if value.denominator != 1 or value < 0:
        raise MalformedCaseError(f"{pair.case_id}: node count {value} is not a nonnegative integer")
    return int(value)


def integrate(cv: ChernVector, pair: SplitPair, k: int = TOP) -> Fraction:
    """``int_M H^(4-k) . c_k`` for a class written in powers of ``H``."""
    return pair.base.degree * cv[k]
