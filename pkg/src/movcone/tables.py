"""Tables of intersection numbers and Hodge data, computed case by case."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

from .chern import odp_count
from .fano import SplitPair, base_by_id, catalog, enumerate_cases, find_case
from .invariants import H, L, cube, hodge, profile

PROFILE_COLUMNS = ("L^3", "L^2H", "LH^2", "H^3", "L.c2", "H.c2", "#ODPs")


@dataclass(frozen=True)
class Table:
    label: str
    title: str
    columns: tuple[str, ...]
    rows: tuple[tuple, ...]
    note: str = ""

    def to_json(self) -> dict:
        out = {"label": self.label, "title": self.title, "columns": list(self.columns),
               "rows": [list(r) for r in self.rows]}
        if self.note:
            out["note"] = self.note
        return out

    def markdown(self) -> str:
        lines = [f"### {self.label}: {self.title}", ""]
        if self.note:
            lines += [f"_{self.note}_", ""]
        lines.append("| " + " | ".join(self.columns) + " |")
        lines.append("|" + "|".join("---" for _ in self.columns) + "|")
        lines += ["| " + " | ".join(str(v) for v in row) + " |" for row in self.rows]
        return "\n".join(lines) + "\n"

    def csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        writer.writerows(self.rows)
        return buf.getvalue()

    def render(self, fmt: str) -> str:
        if fmt == "md":
            return self.markdown()
        if fmt == "csv":
            return self.csv()
        if fmt == "json":
            return json.dumps(self.to_json(), indent=2, ensure_ascii=False) + "\n"
        raise ValueError(f"unknown format {fmt!r}")


def twists_text(twists) -> str:
    return ",".join(str(t) for t in twists)


def _hodge_triple(pair: SplitPair) -> tuple[int, int, int]:
    h = hodge(pair)
    return (h.euler, h.h21, odp_count(pair))


def _profile_table(label: str, case: str) -> Table:
    pair = find_case(case)
    return Table(label, f"intersection numbers on X_F for {pair.case_id}", PROFILE_COLUMNS,
                 (profile(pair).row,))


def _rank3_table() -> Table:
    rows = []
    for case in ("P4/F=2,1,1/E=1,0,0", "P4/F=3,1,1/E=0,0,0", "Gr24/F=2,1,1/E=0,0,0"):
        pair = find_case(case)
        p = profile(pair)
        rows.append((pair.base.id, twists_text(pair.f_twists), twists_text(pair.e_twists),
                     *p.row[:4], int(cube(p, L - H))))
    return Table("T1", "intersection numbers on X_F, rank three with G = L - H",
                 ("M", "F", "E", "L^3", "L^2H", "LH^2", "H^3", "G^3"), tuple(rows))


def _del_pezzo_table() -> Table:
    rows = []
    for f in ((1, 1, 1), (2, 1)):
        for d in (2, 3, 4, 5):
            pair = find_case(f"dP{d}/F={twists_text(f)}")
            rows.append((twists_text(f), d, *_hodge_triple(pair)))
    return Table("A1", "del Pezzo base", ("F", "d", "chi(X_F)", "h21(X_F)", "#ODPs"), tuple(rows))


def _del_pezzo_anticanonical() -> Table:
    rows = []
    for d in (2, 3, 4, 5):
        base = base_by_id(f"dP{d}")
        rows.append((d, base.chi_anticanonical, base.h21_anticanonical))
    return Table("A2", "smooth anticanonical threefold of a del Pezzo base",
                 ("d", "chi(Y~)", "h21(Y~)"), tuple(rows), note="catalog input, echoed")


def _mukai_table() -> Table:
    rows = []
    for base in catalog():
        if base.family != "mukai":
            continue
        pair = find_case(f"{base.id}/F=1,1")
        rows.append((base.genus, base.chi_anticanonical, base.h21_anticanonical, *_hodge_triple(pair)))
    return Table("A3", "Mukai base, F = O(1)^2",
                 ("g", "chi(Y~)", "h21(Y~)", "chi(X_F)", "h21(X_F)", "#ODPs"), tuple(rows))


_TRIVIAL_ORDER = (
    "P4/F=1,1,1,1,1", "P4/F=2,1,1,1", "P4/F=2,2,1", "P4/F=3,1,1", "P4/F=4,1", "P4/F=3,2",
    "Gr24/F=1,1,1,1", "Gr24/F=2,1,1", "Gr24/F=3,1", "Gr24/F=2,2",
)
_NONTRIVIAL_ORDER = ("P4/F=2,1,1/E=1,0,0", "P4/F=3,1/E=1,0", "Gr24/F=2,1/E=1,0")


def _rigid_table() -> Table:
    rows = []
    for case in _TRIVIAL_ORDER:
        pair = find_case(case)
        rows.append((pair.base.id, pair.rank, twists_text(pair.f_twists), *_hodge_triple(pair)))
    return Table("A4", "P4 or Gr(2,4) with trivial E",
                 ("M", "rk", "F", "chi(X_F)", "h21(X_F)", "#ODPs"), tuple(rows))


def _rigid_twisted_table() -> Table:
    rows = []
    for case in _NONTRIVIAL_ORDER:
        pair = find_case(case)
        rows.append((pair.base.id, pair.rank, twists_text(pair.e_twists), twists_text(pair.f_twists),
                     *_hodge_triple(pair)))
    return Table("A5", "P4 or Gr(2,4) with nontrivial E",
                 ("M", "rk", "E", "F", "chi(X_F)", "h21(X_F)", "#ODPs"), tuple(rows))


TABLES = {
    "T1": _rank3_table,
    "T2": lambda: _profile_table("T2", "P4/F=2,2,1"),
    "T3": lambda: _profile_table("T3", "P4/F=2,1,1,1"),
    "T4": lambda: _profile_table("T4", "Gr24/F=1,1,1,1"),
    "A1": _del_pezzo_table,
    "A2": _del_pezzo_anticanonical,
    "A3": _mukai_table,
    "A4": _rigid_table,
    "A5": _rigid_twisted_table,
}


def build_table(label: str) -> Table:
    try:
        return TABLES[label]()
    except KeyError:
        raise ValueError(f"unknown table {label!r}; choose from {', '.join(TABLES)}") from None


def case_list(base_filter: str | None = None) -> Table:
    rows = []
    for pair in enumerate_cases():
        if base_filter and pair.base.id != base_filter:
            continue
        h = hodge(pair)
        desc = " / ".join(pair.base.variants) if pair.base.variants else pair.base.description
        rows.append((pair.case_id, pair.base.index, pair.base.degree, pair.rank, odp_count(pair), h.h21, desc))
    return Table("cases", "admissible bundle pairs",
                 ("case", "r_M", "d_M", "rank", "#ODPs", "h21", "base"), tuple(rows))
