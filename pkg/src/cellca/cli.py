"""Command-line interface.

Subcommands are thin compositions of library calls: `fit`, `diagnose`,
`reconstitute`, `supplementary`, `render`, and `serve`.  JSON goes to stdout
(or --output); human-readable diagnostics go to stderr.  Exit codes: 0 on
success, 2 for usage/parse errors, 1 for computation errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import io as tableio
from .diagnostics import decompose_inertia, outlier_report
from .core import fit_ca
from .errors import CellcaError, ParseError, UnknownLabel
from .reconstitution import CellSet, ReconstitutionConfig, reconstitute
from .supplementary import SupplementarySpec, fit_supplementary

USAGE_EXIT = 2
COMPUTE_EXIT = 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cellca",
        description="Correspondence analysis with cell-wise outlier handling.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, formats=("json",)):
        p.add_argument("--input", required=True, help="CSV table to analyse")
        p.add_argument("--output", help="output file (default: stdout)")
        p.add_argument("--format", choices=formats, default=formats[0])
        p.add_argument("--drop-empty", action="store_true",
                       help="drop all-zero rows/columns instead of rejecting them")

    p = sub.add_parser("fit", help="fit the CA of a table")
    common(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("diagnose", help="rank outlier candidates")
    common(p)
    p.add_argument("--top", type=int, default=5, metavar="N",
                   help="entries per ranking (default 5)")
    p.set_defaults(func=cmd_diagnose)

    p = sub.add_parser("reconstitute", help="impute flagged cells and refit")
    common(p)
    p.add_argument("--cell", action="append", default=[], metavar="ROW:COL",
                   help="flag a cell by labels, repeatable")
    p.add_argument("--order", type=int, default=2,
                   help="reconstitution order (default 2; 0 = independence value)")
    p.add_argument("--tolerance", type=float, default=1e-8)
    p.add_argument("--max-iter", type=int, default=10_000)
    p.add_argument("--negative-policy", default="fallback_to_order_0",
                   choices=("error", "fallback_to_order_0", "clamp_to_zero"))
    p.set_defaults(func=cmd_reconstitute)

    p = sub.add_parser("supplementary", help="refit without rows/columns, project them back")
    common(p)
    p.add_argument("--sup-row", action="append", default=[], metavar="LABEL")
    p.add_argument("--sup-col", action="append", default=[], metavar="LABEL")
    p.set_defaults(func=cmd_supplementary)

    p = sub.add_parser("render", help="render a CA map as SVG")
    common(p, formats=("svg",))
    p.add_argument("--kind", default="symmetric", choices=tableio.PLOT_KINDS)
    p.add_argument("--dims", default="1,2", metavar="A,B")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("serve", help="run the local HTTP service")
    p.add_argument("--port", type=int, default=8640)
    p.set_defaults(func=cmd_serve)

    return parser


def _read(args):
    return tableio.read_table(args.input, drop_empty=args.drop_empty)


def _emit(args, text: str) -> None:
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def cmd_fit(args) -> int:
    table = _read(args)
    sol = fit_ca(table)
    _emit(args, tableio.dump_solution(tableio.write_solution(table, sol)))
    return 0


def cmd_diagnose(args) -> int:
    table = _read(args)
    sol = fit_ca(table)
    dec = decompose_inertia(table, sol)
    report = outlier_report(dec, top_n=args.top)
    _print_report(report)
    doc = tableio.write_solution(table, sol, diagnostics=report)
    _emit(args, tableio.dump_solution(doc))
    return 0


def _print_report(report) -> None:
    err = sys.stderr
    for axis, points in (("rows", report.row_points), ("cols", report.col_points)):
        for dim in sorted(points):
            for rec in points[dim]:
                mark = " *" if rec.flagged else ""
                err.write(f"dim {dim} {axis:4s} {rec.label:20s} "
                          f"contribution {100 * rec.contribution:5.1f}%{mark}\n")
    for rec in report.cells:
        mark = " *" if rec.flagged else ""
        err.write(f"cell ({rec.row_label}, {rec.col_label}) "
                  f"share {100 * rec.share:5.1f}%{mark}\n")
    for rec in report.grouped_cells:
        if len(rec.row_members) > 1 or len(rec.col_members) > 1:
            mark = " *" if rec.flagged else ""
            err.write(f"cell group ({'/'.join(rec.row_members)}, "
                      f"{'/'.join(rec.col_members)}) share {100 * rec.share:5.1f}%{mark}\n")


def _parse_cells(specs: list[str]) -> list[tuple[str, str]]:
    pairs = []
    for spec in specs:
        row, sep, col = spec.partition(":")
        if not sep or not row or not col:
            raise ParseError(f"--cell expects ROWLABEL:COLLABEL, got {spec!r}")
        pairs.append((row, col))
    return pairs


def cmd_reconstitute(args) -> int:
    table = _read(args)
    cells = CellSet.from_labels(table, _parse_cells(args.cell))
    cfg = ReconstitutionConfig(
        order=args.order, tolerance=args.tolerance,
        max_iterations=args.max_iter, negative_policy=args.negative_policy)
    result = reconstitute(table, cells, cfg)
    for note in result.advisories:
        sys.stderr.write(f"advisory: {note}\n")
    doc = tableio.write_solution(result.table, result.solution, reconstitution=result)
    _emit(args, tableio.dump_solution(doc))
    return 0


def cmd_supplementary(args) -> int:
    table = _read(args)
    spec = SupplementarySpec.of(args.sup_row, args.sup_col)
    sup = fit_supplementary(table, spec)
    doc = tableio.write_solution(sup.reduced, sup.base, supplementary=sup)
    _emit(args, tableio.dump_solution(doc))
    return 0


def cmd_render(args) -> int:
    table = _read(args)
    sol = fit_ca(table)
    try:
        a, b = (int(v) for v in args.dims.split(","))
    except ValueError:
        raise ParseError(f"--dims expects two integers like 1,2, got {args.dims!r}") from None
    svg = tableio.render_map(table, sol, kind=args.kind, dims=(a, b))
    _emit(args, svg)
    return 0


def cmd_serve(args) -> int:
    from .service import run
    run(port=args.port)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, UnknownLabel) as exc:
        sys.stderr.write(json.dumps(exc.payload()) + "\n")
        return USAGE_EXIT
    except IndexError as exc:
        sys.stderr.write(json.dumps({"error": "IndexError", "detail": str(exc)}) + "\n")
        return USAGE_EXIT
    except CellcaError as exc:
        sys.stderr.write(json.dumps(exc.payload()) + "\n")
        return COMPUTE_EXIT


if __name__ == "__main__":
    raise SystemExit(main())
