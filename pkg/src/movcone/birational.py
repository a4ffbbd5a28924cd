"""Pushforward matrices of flops, involutions and their composites.

Matrices act on coordinate columns: column ``j`` is the image of the
``j``-th source basis class written in the target basis.  ``compose`` reads
like function composition, so ``compose([f, g])`` is ``f o g``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Sequence

from .errors import (
    AmbiguousSymmetryError,
    CompositionMismatchError,
    IrrationalFlopError,
    NoFlopSolutionError,
    NonHyperbolicError,
)
from .exact import Mat2, QuadExt, det2, eigen2, lift
from .fano import FanoBase
from .invariants import CurveClass, DivClass, H, L, NumericalProfile, cubic_eval, flop_update

DETERMINANTAL_FLOP = "determinantal_flop"
SMALL_FLOP = "small_flop"
INVOLUTION = "involution"
COMPOSITE = "composite"


@dataclass(frozen=True)
class PushforwardMap:
    matrix: Mat2
    source_model: str
    target_model: str
    kind: str

    def __post_init__(self):
        if not self.matrix.is_integral() or abs(self.matrix.det()) != 1:
            raise ValueError(f"pushforward must be unimodular, got {self.matrix}")

    @property
    def pullback(self) -> Mat2:
        """Pullback along the map, i.e. the inverse of the pushforward."""
        return self.matrix.inverse()

    def inverse(self) -> "PushforwardMap":
        kind = self.kind if self.kind != DETERMINANTAL_FLOP else SMALL_FLOP
        return PushforwardMap(self.matrix.inverse(), self.target_model, self.source_model, kind)

    def __call__(self, d: DivClass) -> DivClass:
        return d.pushforward(self.matrix)

    def to_json(self) -> dict:
        return {
            "matrix": self.matrix.as_int_rows(),
            "source": self.source_model,
            "target": self.target_model,
            "kind": self.kind,
        }


@dataclass(frozen=True)
class FlopSolution:
    alpha: Fraction
    beta: Fraction

    def __post_init__(self):
        if self.alpha * self.beta >= 0:
            raise ValueError("a determinantal flop has alpha * beta < 0")


def _square_root(n: Fraction) -> Fraction | None:
    if n < 0:
        return None
    num, den = isqrt(n.numerator), isqrt(n.denominator)
    if num * num == n.numerator and den * den == n.denominator:
        return Fraction(num, den)
    return None


def determinantal_flop(pF: NumericalProfile, pE: NumericalProfile, base: FanoBase | None = None,
                       source: str = "X_F", target: str = "X_E") -> PushforwardMap:
    """Solve for ``chi_* L = alpha L_E + beta H_E`` with ``chi_* H = H_E``.

    Classes containing ``H`` meet no flopped curve, so ``L^2 H``, ``L H^2``
    and ``H^3`` pass through unchanged; this gives a quadratic in ``beta``.
    """
    lll, llh, lhh, hhh = pF.cubic
    e_llh, e_lhh, e_hhh = pE.cubic[1], pE.cubic[2], pE.cubic[3]
    if e_lhh == 0:
        raise NoFlopSolutionError("L_E . H_E^2 vanishes; alpha is undetermined")
    if hhh != e_hhh:
        raise NoFlopSolutionError(f"H^3 differs across the flop: {hhh} vs {e_hhh}")
    qa, qb, qc = e_hhh, -2 * lhh, llh - e_llh
    disc = qb * qb - 4 * qa * qc
    # the discriminant is (2 d c2(F - E^dual))^2 and d c2(F - E^dual) = L_E H_E^2
    if disc != (2 * e_lhh) ** 2:
        raise NoFlopSolutionError(f"discriminant {disc} is not (2 L_E.H_E^2)^2")
    root = _square_root(disc)
    if root is None:
        raise IrrationalFlopError(f"discriminant {disc} is not a rational square")
    found = []
    for beta in ((-qb + root) / (2 * qa), (-qb - root) / (2 * qa)):
        alpha = (lhh - e_hhh * beta) / e_lhh
        if alpha * beta < 0 and (alpha, beta) not in found:
            found.append((alpha, beta))
    if not found:
        raise NoFlopSolutionError("no root of the flop quadratic has alpha * beta < 0")
    if len(found) > 1:
        raise NoFlopSolutionError(f"both roots satisfy alpha * beta < 0: {found}")
    sol = FlopSolution(*found[0])
    if base is not None and satisfies_wall_condition(pF, pE, base.degree):
        if (sol.alpha, sol.beta) != (-1, base.index):
            raise NoFlopSolutionError(f"expected (-1, {base.index}), got {(sol.alpha, sol.beta)}")
    matrix = Mat2(((sol.alpha, 0), (sol.beta, 1)), pF.basis_labels, pE.basis_labels)
    return PushforwardMap(matrix, source, target, DETERMINANTAL_FLOP)


def satisfies_wall_condition(pF: NumericalProfile, pE: NumericalProfile, degree: int) -> bool:
    """``c2(F - E^dual) H^2 > 0 > (c1^2 - 2 c2)(E - F^dual) H^2`` in profile terms."""
    hhh, lhh = pF.cubic[3], pF.cubic[2]
    return pE.cubic[2] > 0 > Fraction(hhh * hhh, degree) - 2 * lhh


def flop_consistent(pF: NumericalProfile, pE: NumericalProfile, chi: PushforwardMap) -> bool:
    """The flopped F-side forms equal the E-side forms pulled back by ``chi``."""
    flopped = flop_update(pF, CurveClass(1, 0), pF.odp)
    return flopped.same_forms(pE.rebase(chi.matrix))


def _complement(f: DivClass) -> DivClass:
    """Some integral ``v`` with ``det(f, v) = 1``."""
    p, q = int(f.coeff_L), int(f.coeff_H)
    g, x, y = _ext_gcd(p, q)
    if g != 1:
        raise ValueError(f"{f} is not primitive")
    # p x + q y = 1, so v = (-y, x) has det(f, v) = p x + q y
    return DivClass(-y, x)


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return (abs(a), (1 if a >= 0 else -1), 0)
    g, x, y = _ext_gcd(b, a % b)
    return g, y, x - (a // b) * y


def symmetry_solver(p: NumericalProfile, fixed: DivClass, model: str = "X") -> PushforwardMap | None:
    """The reflection fixing ``fixed`` that respects every product containing it.

    With ``v`` completing ``fixed`` to a lattice basis and ``w`` the image of
    ``v``, the conditions are ``f^2 w = f^2 v`` and ``f w^2 = f v^2``.  The
    first is a line through ``v``; the second cuts it in ``v`` and one more
    point.
    """
    if not fixed.is_integral() or not fixed:
        raise ValueError("fixed class must be a nonzero integral class")
    f = fixed.primitive()
    v = _complement(f)
    lin = (cubic_eval(p, f, f, L), cubic_eval(p, f, f, H))
    if lin == (0, 0):
        raise AmbiguousSymmetryError(f"{f} squares to zero; the system does not cut out points")
    u = DivClass(-lin[1], lin[0])
    quad = cubic_eval(p, f, u, u)
    cross = cubic_eval(p, f, v, u)
    if quad == 0:
        if cross == 0:
            raise AmbiguousSymmetryError(f"every point of the line through {v} is a solution")
        return None
    t = -2 * cross / quad
    if t == 0:
        return None
    w = v + u * t
    if not w.is_integral():
        return None
    if det2(f.vec, w.vec) != -1:
        return None
    basis = Mat2.from_columns(f.vec, v.vec)
    image = Mat2.from_columns(f.vec, w.vec)
    matrix = (image @ basis.inverse()).relabel(p.basis_labels, p.basis_labels)
    return PushforwardMap(matrix, model, model, INVOLUTION)


def compose(maps: Sequence[PushforwardMap]) -> PushforwardMap:
    """``maps[0] o maps[1] o ... o maps[-1]``."""
    if not maps:
        raise ValueError("nothing to compose")
    out = maps[-1]
    for outer in reversed(maps[:-1]):
        if outer.source_model != out.target_model:
            raise CompositionMismatchError(
                f"cannot follow {out.source_model}->{out.target_model} "
                f"by {outer.source_model}->{outer.target_model}"
            )
        matrix = (outer.matrix @ out.matrix).relabel(out.matrix.domain, outer.matrix.codomain)
        out = PushforwardMap(matrix, out.source_model, outer.target_model, COMPOSITE)
    return out


def is_hyperbolic(m: Mat2) -> bool:
    det, tr = m.det(), m.trace()
    if det == 1:
        return tr * tr > 4
    if det == -1:
        return tr != 0
    return False


def _abs(x: QuadExt) -> QuadExt:
    return -x if x.sign() < 0 else x


def accumulation_rays(m: Mat2, interior: DivClass = H) -> tuple[tuple[DivClass, DivClass], QuadExt]:
    """Eigen rays of a hyperbolic unimodular matrix and its spectral radius.

    The first ray belongs to the eigenvalue of larger absolute value.  Signs
    are fixed so that ``interior`` is a positive combination of the rays.
    """
    if not is_hyperbolic(m):
        raise NonHyperbolicError(f"{m} is of finite order or parabolic")
    spectrum = eigen2(m)
    spectrum.sort(key=lambda pair: _abs(pair[0]), reverse=True)
    (lam, v1), (_, v2) = spectrum
    x = tuple(lift(c, v1[0].d or v1[1].d) for c in interior.vec)
    base = det2(v1, v2)
    s, t = det2(x, v2) / base, det2(v1, x) / base
    if s.sign() == 0 or t.sign() == 0:
        raise NonHyperbolicError(f"{interior} lies on an eigen ray")
    v1 = tuple(c * s.sign() for c in v1)
    v2 = tuple(c * t.sign() for c in v2)
    return (DivClass(*v1), DivClass(*v2)), _abs(lam)


def primitive_curve(wall: DivClass, interior: DivClass) -> CurveClass:
    """Primitive functional vanishing on ``wall`` and positive on ``interior``."""
    if not wall.is_integral() or not wall:
        raise ValueError("wall must be a nonzero integral class")
    w = wall.primitive()
    a, b = int(w.coeff_H), -int(w.coeff_L)
    g = gcd(a, b)
    a, b = a // g, b // g
    value = interior.coeff_L * a + interior.coeff_H * b
    if value == 0:
        raise ValueError(f"{interior} lies on the wall {wall}")
    if value < 0:
        a, b = -a, -b
    return CurveClass(a, b)
