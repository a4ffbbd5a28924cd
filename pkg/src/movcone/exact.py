"""Exact scalars and 2x2 linear algebra.

Rationals are :class:`fractions.Fraction`.  :class:`QuadExt` holds numbers
``a + b*sqrt(D)`` with ``D`` square-free, which is all that is needed to
write down the roots of an integer quadratic and the spectrum of an integral
2x2 matrix.  Nothing in this module ever touches floating point.
"""

from __future__ import annotations

import functools
import math
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import DegenerateSpectrumError, NoRealRootError, NoRealSpectrumError

Rational = Fraction
Scalar = Union[int, Fraction, "QuadExt"]


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, QuadExt) and x.is_rational:
        return x.a
    raise TypeError(f"cannot read {x!r} as an exact rational")


def fraction_text(q: Fraction) -> str:
    """Serialise as ``"p/q"`` (always with a denominator)."""
    return f"{q.numerator}/{q.denominator}"


def squarefree_split(n: int) -> tuple[int, int]:
    """Return ``(s, D)`` with ``n == s*s*D`` and ``D`` square-free, for ``n >= 0``.

    Trial division up to ``isqrt(n)``; inputs here are tiny.
    """
    if n < 0:
        raise ValueError("squarefree_split needs a nonnegative integer")
    if n in (0, 1):
        return (0 if n == 0 else 1), (0 if n == 0 else 1)
    square, rest, p = 1, n, 2
    while p * p <= rest:
        while rest % (p * p) == 0:
            rest //= p * p
            square *= p
        p += 1 if p == 2 else 2
    return square, rest


def is_squarefree(n: int) -> bool:
    if n < 0:
        return False
    return n == 0 or squarefree_split(n)[0] == 1


@functools.total_ordering
class QuadExt:
    """An element ``a + b*sqrt(d)`` of a real quadratic field."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a=0, b=0, d: int = 0):
        a, b = as_fraction(a), as_fraction(b)
        d = int(d)
        if d < 0:
            raise ValueError("radicand must be nonnegative")
        if d > 1 and not is_squarefree(d):
            raise ValueError(f"radicand {d} is not square-free")
        if d == 1:
            a, b = a + b, Fraction(0)
        if d == 0:
            b = Fraction(0)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):
        raise AttributeError("QuadExt is immutable")

    @classmethod
    def sqrt(cls, q) -> "QuadExt":
        """Exact square root of a nonnegative rational."""
        q = as_fraction(q)
        if q < 0:
            raise NoRealRootError(f"square root of negative number {q}")
        # sqrt(p/r) = sqrt(p*r)/r
        s, d = squarefree_split(q.numerator * q.denominator)
        coeff = Fraction(s, q.denominator)
        if d in (0, 1):
            return cls(coeff, 0, 0)
        return cls(0, coeff, d)

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def conjugate(self) -> "QuadExt":
        return QuadExt(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.d

    def _coerce(self, other) -> "QuadExt":
        if isinstance(other, QuadExt):
            if self.b and other.b and self.d != other.d:
                raise ValueError(f"cannot combine sqrt({self.d}) with sqrt({other.d})")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadExt(other, 0, self.d)
        return NotImplemented

    def _radicand(self, other: "QuadExt") -> int:
        return self.d if self.b else other.d

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExt(self.a + o.a, self.b + o.b, self._radicand(o))

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.a, -self.b, self.d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        d = self._radicand(o)
        return QuadExt(self.a * o.a + self.b * o.b * d, self.a * o.b + self.b * o.a, d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in quadratic field")
        return self * QuadExt(o.a / n, -o.b / n, o.d)

    def __rtruediv__(self, other):
        return QuadExt(other, 0, self.d) / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return QuadExt(1, 0, self.d) / (self ** -k)
        result, base = QuadExt(1, 0, self.d), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def sign(self) -> int:
        """Exact sign of the real number represented."""
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0 or sa == sb:
            return sa or sb
        if sa == 0:
            return sb
        # opposite signs: compare squares
        lhs, rhs = self.a * self.a, self.b * self.b * self.d
        return sa if lhs > rhs else sb

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        if isinstance(other, QuadExt):
            if self.b == 0 and other.b == 0:
                return self.a == other.a
            return self.a == other.a and self.b == other.b and self.d == other.d
        return NotImplemented

    def __lt__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return (self - o).sign() < 0

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __repr__(self):
        return f"QuadExt({self.a!s}, {self.b!s}, {self.d})"

    def __str__(self):
        return format_quad(self.a, self.b, self.d)

    def approx(self) -> float:
        """Floating approximation, for drawing only."""
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def to_json(self) -> dict:
        return {"a": fraction_text(self.a), "b": fraction_text(self.b), "d": self.d}

    @classmethod
    def from_json(cls, obj: dict) -> "QuadExt":
        return cls(Fraction(obj["a"]), Fraction(obj["b"]), int(obj["d"]))


def format_quad(a: Fraction, b: Fraction, d: int) -> str:
    if b == 0:
        return str(a)
    root = f"√{d}"
    if b == 1:
        rad = root
    elif b == -1:
        rad = "-" + root
    elif b.denominator == 1:
        rad = f"{b}{root}"
    else:
        rad = f"({b}){root}"
    if a == 0:
        return rad
    if rad.startswith("-"):
        return f"{a} - {rad[1:]}"
    return f"{a} + {rad}"


def lift(x, d: int = 0) -> QuadExt:
    return x if isinstance(x, QuadExt) else QuadExt(x, 0, d)


def solve_quadratic(a, b, c) -> tuple[QuadExt, QuadExt]:
    """Both roots of ``a x^2 + b x + c``, as ``(-b + sqrt(disc), -b - sqrt(disc)) / 2a``."""
    a, b, c = as_fraction(a), as_fraction(b), as_fraction(c)
    if a == 0:
        raise ValueError("leading coefficient must be nonzero")
    disc = b * b - 4 * a * c
    if disc < 0:
        raise NoRealRootError(f"discriminant {disc} is negative")
    root = QuadExt.sqrt(disc)
    return (root - b) / (2 * a), (-root - b) / (2 * a)


class Mat2:
    """A 2x2 matrix of rationals acting on coordinate columns.

    Column ``j`` holds the image of the ``j``-th domain basis vector written
    in the codomain basis.
    """

    __slots__ = ("entries", "domain", "codomain")

    def __init__(self, rows: Sequence[Sequence], domain=("L", "H"), codomain=None):
        (p, q), (r, s) = rows
        object.__setattr__(self, "entries", tuple(as_fraction(x) for x in (p, q, r, s)))
        object.__setattr__(self, "domain", tuple(domain))
        object.__setattr__(self, "codomain", tuple(codomain if codomain is not None else domain))

    def __setattr__(self, name, value):
        raise AttributeError("Mat2 is immutable")

    @classmethod
    def from_columns(cls, col0, col1, domain=("L", "H"), codomain=None) -> "Mat2":
        return cls(((col0[0], col1[0]), (col0[1], col1[1])), domain, codomain)

    @classmethod
    def identity(cls, basis=("L", "H")) -> "Mat2":
        return cls(((1, 0), (0, 1)), basis, basis)

    @property
    def rows(self) -> tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]:
        p, q, r, s = self.entries
        return (p, q), (r, s)

    def column(self, j: int) -> tuple[Fraction, Fraction]:
        p, q, r, s = self.entries
        return (p, r) if j == 0 else (q, s)

    def det(self) -> Fraction:
        p, q, r, s = self.entries
        return p * s - q * r

    def trace(self) -> Fraction:
        return self.entries[0] + self.entries[3]

    def inverse(self) -> "Mat2":
        p, q, r, s = self.entries
        det = self.det()
        if det == 0:
            raise ZeroDivisionError("singular matrix")
        return Mat2(((s / det, -q / det), (-r / det, p / det)), self.codomain, self.domain)

    def __matmul__(self, other):
        if isinstance(other, Mat2):
            p, q, r, s = self.entries
            e, f, g, h = other.entries
            return Mat2(
                ((p * e + q * g, p * f + q * h), (r * e + s * g, r * f + s * h)),
                other.domain,
                self.codomain,
            )
        return NotImplemented

    def apply(self, vec: Sequence) -> tuple:
        p, q, r, s = self.entries
        x, y = vec
        return (x * p + y * q, x * r + y * s)

    def __pow__(self, k: int) -> "Mat2":
        if k < 0:
            return self.inverse() ** -k
        result, base = Mat2.identity(self.domain), self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def relabel(self, domain=None, codomain=None) -> "Mat2":
        return Mat2(self.rows, domain or self.domain, codomain or self.codomain)

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for x in self.entries)

    def as_int_rows(self) -> list[list[int]]:
        if not self.is_integral():
            raise ValueError("matrix has non-integral entries")
        return [[int(x) for x in row] for row in self.rows]

    def __eq__(self, other):
        if isinstance(other, Mat2):
            return self.entries == other.entries
        if isinstance(other, (list, tuple)):
            try:
                return self.entries == tuple(as_fraction(x) for row in other for x in row)
            except TypeError:
                return False
        return NotImplemented

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return f"Mat2({[[str(x) for x in row] for row in self.rows]})"

    def __str__(self):
        cells = [[str(x) for x in row] for row in self.rows]
        width = max(len(c) for row in cells for c in row)
        return "\n".join("[ " + "  ".join(c.rjust(width) for c in row) + " ]" for row in cells)

    def to_json(self) -> dict:
        return {
            "rows": [[fraction_text(x) if x.denominator != 1 else int(x) for x in row] for row in self.rows],
            "domain": list(self.domain),
            "codomain": list(self.codomain),
        }


def _scale_primitive(vec: Sequence[QuadExt]) -> tuple[QuadExt, QuadExt]:
    """Scale to integral coefficients with content 1 and a positive leading entry."""
    parts = [p for v in vec for p in (v.a, v.b)]
    den = 1
    for p in parts:
        den = den * p.denominator // math.gcd(den, p.denominator)
    nums = [int(p * den) for p in parts]
    content = functools.reduce(math.gcd, nums, 0) or 1
    factor = Fraction(den, content)
    scaled = tuple(v * factor for v in vec)
    lead = next(v for v in scaled if v)
    if lead.sign() < 0:
        scaled = tuple(-v for v in scaled)
    return scaled


def eigen2(m: Mat2, lead=None) -> list[tuple[QuadExt, tuple[QuadExt, QuadExt]]]:
    """Spectrum of ``m`` as ``[(eigenvalue, ray), ...]``, eigenvalues descending.

    Rays are scaled to integral primitive form with a positive leading
    coordinate, or, when ``lead`` is given, so the first nonzero coordinate
    equals ``lead``.
    """
    p, q, r, s = m.entries
    tr, det = p + s, p * s - q * r
    disc = tr * tr - 4 * det
    if disc == 0:
        raise DegenerateSpectrumError(f"repeated eigenvalue {tr / 2}")
    if disc < 0:
        raise NoRealSpectrumError("complex conjugate eigenvalues")
    lam1, lam2 = solve_quadratic(1, -tr, det)
    if lam1 < lam2:
        lam1, lam2 = lam2, lam1
    out = []
    for lam in (lam1, lam2):
        if q != 0:
            vec = (lift(q, lam.d), lam - p)
        elif r != 0:
            vec = (lam - s, lift(r, lam.d))
        else:
            vec = (lift(1), lift(0)) if lam == p else (lift(0), lift(1))
        if lead is None:
            vec = _scale_primitive(vec)
        else:
            first = next(v for v in vec if v)
            vec = tuple(v * lead / first for v in vec)
        out.append((lam, vec))
    return out


def det2(u: Sequence, v: Sequence):
    """Orientation determinant of two coordinate columns."""
    return u[0] * v[1] - u[1] * v[0]


def gcd_all(values: Iterable[int]) -> int:
    return functools.reduce(math.gcd, values, 0)
