"""``movcone``: case lists, tables and movable-cone reports."""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources

from .chambers import INFINITE, MovableCone, build_movable, verify_cone_conjecture
from .errors import (
    CatalogError,
    MalformedCaseError,
    MovconeError,
    NotCalabiYauError,
    SolverError,
    UnknownCaseError,
    VerificationError,
)
from .fano import export_catalog, find_case
from .svg import cone_svg
from .tables import TABLES, Table, build_table, case_list

EXIT_OK, EXIT_USAGE, EXIT_NOT_CY, EXIT_SOLVER, EXIT_VERIFY = 0, 2, 3, 4, 5


def cone_schema() -> dict:
    return json.loads(resources.files("movcone").joinpath("data/cone.schema.json").read_text())


def table_schema() -> dict:
    return json.loads(resources.files("movcone").joinpath("data/table.schema.json").read_text())


def movable_report(mc: MovableCone, depth: int) -> dict:
    out = mc.to_json()
    out["verification"] = verify_cone_conjecture(mc, depth)
    return out


def _movable_markdown(mc: MovableCone, report: dict) -> str:
    lines = [f"# {mc.case_id}", "", f"finiteness: {mc.finiteness}"]
    left, right = mc.boundary
    lines.append(f"boundary: {left} ... {right}")
    if mc.finiteness == INFINITE:
        lines += [
            f"fundamental domain: <{mc.fundamental_domain[0]}, {mc.fundamental_domain[1]}>",
            "generator (pullback):",
            str(mc.generator.pullback),
            f"spectral radius: {mc.spectral_radius}",
        ]
    if mc.mirror is not None:
        lines += ["mirror:", str(mc.mirror.matrix)]
    lines += ["", "| model | nef cone | provenance |", "|---|---|---|"]
    for c in mc.chambers:
        a, b = c.model.nef_generators
        lines.append(f"| {c.model.id} | <{a}, {b}> | {c.model.provenance} |")
    lines += ["", "| wall | kind | certificates |", "|---|---|---|"]
    for w in mc.all_walls:
        cert = ", ".join(f"{k}={v}" for k, v in w.to_json()["certificates"].items())
        lines.append(f"| {w.divisor} | {w.kind} | {cert} |")
    v = report["verification"]
    lines += ["", "verified: " + ", ".join(f"{k}={v[k]}" for k in v if k not in ("case", "rays"))]
    return "\n".join(lines) + "\n"


def _movable_csv(mc: MovableCone) -> str:
    rows = [(str(w.divisor), w.kind) for w in mc.all_walls]
    return Table("walls", mc.case_id, ("wall", "kind"), tuple(rows)).csv()


def cmd_list(args) -> int:
    table = case_list(args.base)
    if args.base and not table.rows:
        raise UnknownCaseError(f"no cases over base {args.base!r}")
    sys.stdout.write(table.render(args.format))
    return EXIT_OK


def cmd_table(args) -> int:
    sys.stdout.write(build_table(args.which).render(args.format))
    return EXIT_OK


def cmd_movable(args) -> int:
    pair = find_case(args.case)
    mc = build_movable(pair)
    report = movable_report(mc, args.depth)
    if args.svg:
        with open(args.svg, "w", encoding="utf-8") as fh:
            fh.write(cone_svg(mc))
    if args.format == "json":
        sys.stdout.write(json.dumps(report, indent=2, ensure_ascii=False) + "\n")
    elif args.format == "csv":
        sys.stdout.write(_movable_csv(mc))
    else:
        sys.stdout.write(_movable_markdown(mc, report))
    return EXIT_OK


def cmd_catalog(args) -> int:
    sys.stdout.write(export_catalog())
    return EXIT_OK


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="movcone", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    formats = ("md", "csv", "json")

    p = sub.add_parser("list", help="list admissible cases")
    p.add_argument("--base", help="only cases over this base id, e.g. Mu3")
    p.add_argument("--format", choices=formats, default="md")
    p.set_defaults(func=cmd_list)

    p = sub.add_parser("table", help="reproduce a table of intersection or Hodge numbers")
    p.add_argument("which", choices=tuple(TABLES))
    p.add_argument("--format", choices=formats, default="md")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("movable", help="build and verify the movable cone of a case")
    p.add_argument("case", help="case id such as P4/F=2,1,1,1/E=0,0,0,0")
    p.add_argument("--depth", type=_positive, default=10)
    p.add_argument("--svg", metavar="PATH")
    p.add_argument("--format", choices=formats, default="md")
    p.set_defaults(func=cmd_movable)

    p = sub.add_parser("catalog", help="print the base catalog as JSON")
    p.set_defaults(func=cmd_catalog)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NotCalabiYauError as exc:
        print(f"movcone: {exc}", file=sys.stderr)
        return EXIT_NOT_CY
    except (UnknownCaseError, MalformedCaseError, CatalogError) as exc:
        print(f"movcone: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SolverError as exc:
        print(f"movcone: solver failed: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except VerificationError as exc:
        print(f"movcone: verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except MovconeError as exc:
        print(f"movcone: {exc}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
