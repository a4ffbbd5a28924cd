"""Picard-rank-one Fano fourfolds and the split bundle pairs built on them.

A base is reduced to four integers: its index ``r``, its degree
``d = H^4``, the pairing of ``c2(T)`` with ``H^2`` and the topological Euler
number of a smooth anticanonical divisor.  The Euler numbers of the del Pezzo
and Mukai bases are stored data; the other three numbers follow from the
index and degree.

Case ids look like ``P4/F=2,1,1,1/E=0,0,0,0``.
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Iterable, Sequence

from .errors import CatalogError, NotCalabiYauError, UnknownCaseError

CATALOG_ENV = "MOVCONE_CATALOG"


@dataclass(frozen=True)
class FanoBase:
    id: str
    index: int
    degree: int
    c2_pairing: int
    chi_anticanonical: int
    description: str
    family: str
    variants: tuple[str, ...] = ()

    @property
    def genus(self) -> int | None:
        return self.degree // 2 + 1 if self.family == "mukai" else None

    @property
    def c1_c3(self) -> Fraction:
        """``c1(T).c3(T)`` recovered from the anticanonical Euler number."""
        return Fraction(self.chi_anticanonical) + self.index**2 * self.c2_pairing

    @property
    def c1sq_c2(self) -> int:
        return self.index**2 * self.c2_pairing

    @property
    def h21_anticanonical(self) -> int:
        return 1 - self.chi_anticanonical // 2

    def section_count(self) -> Fraction:
        """Riemann-Roch value of ``h^0(H)`` on the base."""
        r = self.index
        return Fraction((r + 1) ** 2 * self.degree, 24) + Fraction((r + 1) * self.c2_pairing, 24) + 1

    def to_json(self) -> dict:
        out = {
            "id": self.id,
            "index": self.index,
            "degree": self.degree,
            "c2_pairing": self.c2_pairing,
            "chi_anticanonical": self.chi_anticanonical,
            "description": self.description,
            "family": self.family,
        }
        if self.variants:
            out["variants"] = list(self.variants)
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "FanoBase":
        return cls(
            id=obj["id"],
            index=int(obj["index"]),
            degree=int(obj["degree"]),
            c2_pairing=int(obj["c2_pairing"]),
            chi_anticanonical=int(obj["chi_anticanonical"]),
            description=obj["description"],
            family=obj["family"],
            variants=tuple(obj.get("variants", ())),
        )


# Euler numbers of smooth anticanonical threefolds, keyed by degree / genus.
_DEL_PEZZO_CHI = {2: -156, 3: -144, 4: -144, 5: -150}
_DEL_PEZZO_MODEL = {
    2: "quartic M_4 in P(1^5, 2)",
    3: "cubic M_3 in P^5",
    4: "complete intersection M_{2,2} in P^6",
    5: "codimension-2 linear section of Gr(2,5) in P^9",
}
_MUKAI_CHI = {2: -256, 3: -176, 4: -144, 5: -128, 6: -120, 7: -116, 8: -116, 9: -116, 10: -120}
_MUKAI_MODEL = {
    2: ("sextic M_6 in P(1^5, 3)",),
    3: ("quartic M_4 in P^5", "complete intersection M_{2,4} in P(1^6, 2)"),
    4: ("complete intersection M_{2,3} in P^6",),
    5: ("complete intersection M_{2,2,2} in P^7",),
    6: ("linear section of a quadric section of the cone over Gr(2,5)",),
    7: ("linear section of the spinor tenfold OG_+(5,10) in P^15",),
    8: ("linear section of Gr(2,6) in P^14",),
    9: ("linear section of the Lagrangian Grassmannian LG(3,6) in P^13",),
    10: ("linear section of the isotropic Grassmannian in Gr(5,7)",),
}


def _builtin() -> list[FanoBase]:
    bases = [
        FanoBase("P4", 5, 1, 10, -200, "projective space P^4", "projective"),
        FanoBase("Gr24", 4, 2, 14, -176, "Grassmannian Gr(2,4), a quadric in P^5", "grassmannian"),
    ]
    for d, chi in _DEL_PEZZO_CHI.items():
        bases.append(FanoBase(f"dP{d}", 3, d, 2 * d + 12, chi, _DEL_PEZZO_MODEL[d], "del_pezzo"))
    for g, chi in _MUKAI_CHI.items():
        models = _MUKAI_MODEL[g]
        bases.append(
            FanoBase(
                f"Mu{g}",
                2,
                2 * g - 2,
                2 * g + 22,
                chi,
                " or ".join(models),
                "mukai",
                models if len(models) > 1 else (),
            )
        )
    return bases


def check_base(base: FanoBase) -> None:
    """Raise :class:`CatalogError` unless ``base`` is internally consistent."""
    r, d = base.index, base.degree
    problems = []
    if not 2 <= r <= 5:
        problems.append(f"index {r} out of range")
    if r == 5 and d != 1:
        problems.append("index 5 needs degree 1")
    if r == 4 and d != 2:
        problems.append("index 4 needs degree 2")
    if r == 3:
        if not 2 <= d <= 5:
            problems.append(f"del Pezzo degree {d} not in 2..5")
        if base.c2_pairing != 2 * d + 12:
            problems.append("del Pezzo c2 pairing must be 2d+12")
        if base.section_count() != Fraction(d * (r - 1), 2) + 3:
            problems.append("section count mismatch")
    if r == 2:
        if d % 2 or not 2 <= d // 2 + 1 <= 10:
            problems.append(f"Mukai degree {d} is not 2g-2 with 2<=g<=10")
        if base.c2_pairing != d + 24:
            problems.append("Mukai c2 pairing must be d+24")
        if base.section_count() != Fraction(d, 2) + 4:
            problems.append("section count mismatch")
    if base.c1_c3.denominator != 1:
        problems.append("c1.c3 is not an integer")
    if base.chi_anticanonical % 2:
        problems.append("Euler number of a Calabi-Yau threefold must be even")
    if problems:
        raise CatalogError(f"{base.id}: " + "; ".join(problems))


def _schema() -> dict:
    return json.loads(resources.files("movcone").joinpath("data/catalog.schema.json").read_text())


def load_catalog(path: str | os.PathLike) -> list[FanoBase]:
    """Read and validate a catalog JSON file."""
    import jsonschema

    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    try:
        jsonschema.validate(raw, _schema())
    except jsonschema.ValidationError as exc:
        raise CatalogError(f"{path}: {exc.message}") from exc
    bases = [FanoBase.from_json(obj) for obj in raw["bases"]]
    for base in bases:
        check_base(base)
    return bases


@lru_cache(maxsize=None)
def _cached(path: str | None) -> tuple[FanoBase, ...]:
    bases = load_catalog(path) if path else _builtin()
    for base in bases:
        check_base(base)
    return tuple(bases)


def catalog(path: str | None = None) -> list[FanoBase]:
    """All bases, read from ``path``, ``$MOVCONE_CATALOG`` or the built-in table."""
    return list(_cached(path or os.environ.get(CATALOG_ENV) or None))


def base_by_id(base_id: str, bases: Sequence[FanoBase] | None = None) -> FanoBase:
    for base in bases if bases is not None else catalog():
        if base.id == base_id:
            return base
    raise UnknownCaseError(f"unknown base {base_id!r}")


def export_catalog(bases: Iterable[FanoBase] | None = None) -> str:
    bases = catalog() if bases is None else bases
    return json.dumps({"bases": [b.to_json() for b in bases]}, indent=2, ensure_ascii=False) + "\n"


@dataclass(frozen=True)
class SplitPair:
    """``F = (+) O(a_i)`` and ``E = (+) O(b_i)`` over a base."""

    base: FanoBase
    f_twists: tuple[int, ...]
    e_twists: tuple[int, ...] = field(default=())

    def __post_init__(self):
        f = tuple(sorted((int(a) for a in self.f_twists), reverse=True))
        e = tuple(sorted((int(b) for b in self.e_twists), reverse=True)) or (0,) * len(f)
        object.__setattr__(self, "f_twists", f)
        object.__setattr__(self, "e_twists", e)

    @property
    def rank(self) -> int:
        return len(self.f_twists)

    @property
    def e_trivial(self) -> bool:
        return not any(self.e_twists)

    @property
    def case_id(self) -> str:
        return format_case_id(self.base.id, self.f_twists, self.e_twists)

    def swapped(self) -> "SplitPair":
        """The same threefold family viewed from the other side: ``(E(1), F(-1))``."""
        return SplitPair(self.base, tuple(b + 1 for b in self.e_twists), tuple(a - 1 for a in self.f_twists))

    def __str__(self):
        return self.case_id


def format_case_id(base_id: str, f: Sequence[int], e: Sequence[int]) -> str:
    return f"{base_id}/F={','.join(map(str, f))}/E={','.join(map(str, e))}"


_CASE_RE = re.compile(r"^\s*([A-Za-z0-9]+)\s*/\s*F\s*=\s*([-\d,\s]+?)\s*(?:/\s*E\s*=\s*([-\d,\s]+?))?\s*$")


def parse_case_id(text: str, bases: Sequence[FanoBase] | None = None) -> SplitPair:
    """Parse ``BASE/F=a,b,.../E=c,d,...``; a missing ``E`` means trivial."""
    m = _CASE_RE.match(text)
    if not m:
        raise UnknownCaseError(f"cannot parse case id {text!r}")
    base = base_by_id(m.group(1), bases)
    try:
        f = tuple(int(x) for x in m.group(2).split(",") if x.strip())
        e = tuple(int(x) for x in m.group(3).split(",") if x.strip()) if m.group(3) else ()
    except ValueError as exc:
        raise UnknownCaseError(f"bad twists in {text!r}") from exc
    if not f:
        raise UnknownCaseError(f"no F twists in {text!r}")
    return SplitPair(base, f, e)


def cy_condition(pair: SplitPair) -> bool:
    """Twists sum to the index, ``F`` is positive, ``E`` nonnegative, ranks agree."""
    f, e = pair.f_twists, pair.e_twists
    return (
        len(f) == len(e) >= 2
        and all(a > 0 for a in f)
        and all(b >= 0 for b in e)
        and sum(f) + sum(e) == pair.base.index
    )


def require_cy(pair: SplitPair) -> None:
    if not cy_condition(pair):
        raise NotCalabiYauError(f"{pair.case_id} violates the Calabi-Yau condition")


# Split Fano bundles with c1 = c1(T_M), by base family, and the pairs with E nontrivial.
_TRIVIAL_E = {
    "projective": [(4, 1), (3, 2), (3, 1, 1), (2, 2, 1), (2, 1, 1, 1), (1, 1, 1, 1, 1)],
    "grassmannian": [(3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)],
    "del_pezzo": [(2, 1), (1, 1, 1)],
    "mukai": [(1, 1)],
}
_NONTRIVIAL_E = {
    "projective": [((2, 1, 1), (1, 0, 0)), ((3, 1), (1, 0))],
    "grassmannian": [((2, 1), (1, 0))],
}


def enumerate_cases(bases: Sequence[FanoBase] | None = None) -> list[SplitPair]:
    """Every admissible pair, ordered by base then by twists."""
    bases = catalog() if bases is None else list(bases)
    cases = []
    for pos, base in enumerate(bases):
        for f in _TRIVIAL_E.get(base.family, []):
            cases.append((pos, SplitPair(base, f)))
        for f, e in _NONTRIVIAL_E.get(base.family, []):
            cases.append((pos, SplitPair(base, f, e)))
    cases.sort(key=lambda item: (item[0], item[1].f_twists, item[1].e_twists))
    out = [pair for _, pair in cases]
    for pair in out:
        require_cy(pair)
    return out


def find_case(text: str, bases: Sequence[FanoBase] | None = None) -> SplitPair:
    """Parse a case id and make sure it is one of the enumerated cases."""
    pair = parse_case_id(text, bases)
    require_cy(pair)
    for known in enumerate_cases(bases):
        if known == pair:
            return known
    raise UnknownCaseError(f"{pair.case_id} is not an admissible case")
