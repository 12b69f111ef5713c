"""Table ingestion, solution documents, and SVG maps.

The CSV dialect is deliberately plain: comma separator, dot decimal, first
header cell blank or "label", one row label per data line.  A trailing
"Total" column and/or "Total" row (as produced by spreadsheet exports) is
detected by name and stripped.  Solution documents are JSON objects that
round-trip losslessly (floats keep full precision; only the inertia
percentages are presentation-rounded to one decimal).  Maps are rendered as
self-contained SVG 1.1 text with no graphics dependency, byte-identical
across runs for identical inputs.
"""

from __future__ import annotations

import csv
import io as _io
import json
from pathlib import Path
from typing import TextIO

import numpy as np

from .core import (CASolution, ContingencyTable, CorrespondenceDecomposition,
                   decompose, duplicate_profile_groups)
from .diagnostics import OutlierReport
from .errors import ParseError
from .reconstitution import ReconstitutionResult
from .supplementary import SupplementarySolution

SCHEMA_VERSION = 1

PLOT_KINDS = ("symmetric", "asymmetric_row", "asymmetric_col", "contribution_biplot")


def read_table(src: str | Path | TextIO, *, drop_empty: bool = False) -> ContingencyTable:
    """Read a labeled table from a CSV file path or text stream.

    With drop_empty=True, all-zero rows and columns are removed before
    validation instead of being rejected.
    """
    if hasattr(src, "read"):
        return parse_table(src.read(), drop_empty=drop_empty)
    return parse_table(Path(src).read_text(encoding="utf-8"), drop_empty=drop_empty)


def parse_table(text: str, *, drop_empty: bool = False) -> ContingencyTable:
    """Parse CSV text into a ContingencyTable."""
    rows = list(csv.reader(_io.StringIO(text.lstrip("﻿"))))
    rows = [r for r in rows if any(field.strip() for field in r)]
    if not rows:
        raise ParseError("no header line found", line=1)
    header = [field.strip() for field in rows[0]]
    if header[0].lower() not in ("", "label"):
        raise ParseError(
            f"first header cell must be blank or 'label', got {header[0]!r}",
            line=1, column=1)
    col_labels = header[1:]
    if not col_labels:
        raise ParseError("header defines no columns", line=1)
    if len(rows) < 2:
        raise ParseError("no data lines found", line=2)

    row_labels: list[str] = []
    data: list[list[float]] = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise ParseError(
                f"expected {len(header)} fields, got {len(row)}",
                line=lineno, column=len(row))
        row_labels.append(row[0].strip())
        values = []
        for colno, field in enumerate(row[1:], start=2):
            try:
                value = float(field)
            except ValueError:
                raise ParseError(
                    f"non-numeric entry {field.strip()!r}",
                    line=lineno, column=colno) from None
            if not np.isfinite(value):
                raise ParseError(f"non-finite entry {field.strip()!r}",
                                 line=lineno, column=colno)
            if value < 0:
                raise ParseError(f"negative entry {value}", line=lineno, column=colno)
            values.append(value)
        data.append(values)

    # strip trailing Total column / Total row produced by spreadsheet exports
    if col_labels and col_labels[-1].lower() == "total":
        col_labels = col_labels[:-1]
        data = [r[:-1] for r in data]
        if not col_labels:
            raise ParseError("table has no columns besides 'Total'", line=1)
    if row_labels and row_labels[-1].lower() == "total":
        row_labels = row_labels[:-1]
        data = data[:-1]
        if not row_labels:
            raise ParseError("table has no rows besides 'Total'", line=2)

    for lbl, line in _duplicates(row_labels, first_line=2):
        raise ParseError(f"duplicate row label {lbl!r}", line=line, column=1)
    for lbl, pos in _duplicates(col_labels, first_line=2):
        raise ParseError(f"duplicate column label {lbl!r}", line=1, column=pos)

    x = np.array(data, dtype=float)
    if drop_empty:
        keep_r = np.flatnonzero(x.sum(axis=1) > 0)
        keep_c = np.flatnonzero(x.sum(axis=0) > 0)
        x = x[np.ix_(keep_r, keep_c)]
        row_labels = [row_labels[i] for i in keep_r]
        col_labels = [col_labels[j] for j in keep_c]
    return ContingencyTable(tuple(row_labels), tuple(col_labels), x)


def _duplicates(labels, first_line):
    seen = {}
    for pos, lbl in enumerate(labels):
        if lbl in seen:
            yield lbl, pos + first_line
        seen[lbl] = pos


def write_table(table: ContingencyTable, path: str | Path | None = None) -> str:
    """Serialize a table back to CSV text (and optionally to a file)."""
    out = _io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow([""] + list(table.col_labels))
    for label, row in zip(table.row_labels, table.x):
        writer.writerow([label] + [_number(v) for v in row])
    text = out.getvalue()
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


def _number(v: float):
    # integers stay integers in CSV output
    return int(v) if float(v).is_integer() else float(v)


def write_solution(table: ContingencyTable, sol: CASolution, *,
                   dec: CorrespondenceDecomposition | None = None,
                   diagnostics: OutlierReport | None = None,
                   reconstitution: ReconstitutionResult | None = None,
                   supplementary: SupplementarySolution | None = None) -> dict:
    """Assemble the JSON solution document for a fitted table.

    Optional sections are omitted entirely when not supplied.  All floats are
    emitted at full precision except `inertia_proportions`, which are
    percentages rounded to one decimal for display.
    """
    if dec is None:
        dec = decompose(table)
    doc = {
        "schema": SCHEMA_VERSION,
        "labels": {"rows": list(table.row_labels), "cols": list(table.col_labels)},
        "masses": {"rows": dec.row_masses.tolist(), "cols": dec.col_masses.tolist()},
        "sigma": sol.sigma.tolist(),
        "inertia_proportions": [round(float(100.0 * p), 1) for p in sol.inertia_proportions],
        "total_inertia": sol.total_inertia,
        "rank": sol.rank,
        "phi": sol.phi.tolist(),
        "gamma": sol.gamma.tolist(),
        "f": sol.f.tolist(),
        "g": sol.g.tolist(),
    }
    if diagnostics is not None:
        doc["diagnostics"] = diagnostics.to_dict()
    if reconstitution is not None:
        res = reconstitution
        doc["reconstitution"] = {
            "cells": [
                {"row": table.row_labels[i], "col": table.col_labels[j], "value": v}
                for (i, j), v in sorted(res.converged_values.items())
            ],
            "order": res.requested_order,
            "order_used": res.order_used,
            "converged": res.converged,
            "iterations_used": res.iterations_used,
            "trace": list(res.trace),
            "fallback_applied": res.fallback_applied,
            "advisories": list(res.advisories),
        }
    if supplementary is not None:
        sup = supplementary
        doc["supplementary"] = {
            "sup_rows": sorted(sup.sup_row_coords),
            "sup_cols": sorted(sup.sup_col_coords),
            "row_coords": {l: c.tolist() for l, c in sorted(sup.sup_row_coords.items())},
            "col_coords": {l: c.tolist() for l, c in sorted(sup.sup_col_coords.items())},
            "reduced_shape": list(sup.reduced_shape),
        }
    return doc


def dump_solution(doc: dict, path: str | Path | None = None) -> str:
    """JSON-encode a solution document (full float precision, stable keys)."""
    text = json.dumps(doc, indent=2, allow_nan=False)
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


def load_solution(path: str | Path) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))


# ---------------------------------------------------------------------------
# SVG maps

_W = 720                 # canvas size, px (square so units match on both axes)
_PAD = 56                # margin for axis labels
_ROW_COLOR = "#1f77b4"
_COL_COLOR = "#d62728"
_SUP_COLOR = "#7f7f7f"


def render_map(table: ContingencyTable, sol: CASolution, *,
               kind: str = "symmetric", dims: tuple[int, int] = (1, 2),
               supplementary: SupplementarySolution | None = None,
               title: str | None = None) -> str:
    """Render a CA map as SVG text.

    kind selects the coordinates: "symmetric" plots rows and columns in
    principal coordinates, "asymmetric_row" plots rows principal / columns
    standard, "asymmetric_col" the mirror image, and "contribution_biplot"
    plots rows principal against columns scaled so their squared coordinate
    equals the contribution.  dims is the 1-based dimension pair.  Points of
    duplicate-profile groups collapse into one glyph labeled by the first
    member, with the full membership in the tooltip.  Output is deterministic
    byte-for-byte.
    """
    if kind not in PLOT_KINDS:
        raise ValueError(f"kind must be one of {PLOT_KINDS}")
    a, b = dims
    if sol.rank > 0 and not (1 <= a <= sol.rank and 1 <= b <= sol.rank):
        raise IndexError(f"dims {dims} out of range for rank {sol.rank}")

    row_xy, col_xy = _plot_coordinates(table, sol, kind, a, b)
    sup_rows: dict = {}
    sup_cols: dict = {}
    if supplementary is not None:
        sup_rows = {l: _pick(c, a, b, sol.rank) for l, c in sorted(supplementary.sup_row_coords.items())}
        sup_cols = {l: _pick(c, a, b, sol.rank) for l, c in sorted(supplementary.sup_col_coords.items())}

    row_groups, col_groups = duplicate_profile_groups(table)
    pts = []  # (x, y, label, members, css_class, shape)
    for grp in row_groups:
        label = table.row_labels[grp[0]]
        members = [table.row_labels[i] for i in grp]
        x, y = row_xy[grp[0]]
        pts.append((x, y, label, members, "row", "circle"))
    for grp in col_groups:
        label = table.col_labels[grp[0]]
        members = [table.col_labels[j] for j in grp]
        x, y = col_xy[grp[0]]
        pts.append((x, y, label, members, "col", "square"))
    for label, (x, y) in sup_rows.items():
        pts.append((x, y, label, [label], "sup-row", "circle"))
    for label, (x, y) in sup_cols.items():
        pts.append((x, y, label, [label], "sup-col", "square"))

    return _svg(pts, sol, a, b, title or f"{kind} map")


def _plot_coordinates(table, sol, kind, a, b):
    if sol.rank == 0:
        zero_r = np.zeros((table.shape[0], 2))
        zero_c = np.zeros((table.shape[1], 2))
        return zero_r, zero_c
    ia, ib = a - 1, b - 1
    if kind == "symmetric":
        rows, cols = sol.f, sol.g
    elif kind == "asymmetric_row":
        rows, cols = sol.f, sol.gamma
    elif kind == "asymmetric_col":
        rows, cols = sol.phi, sol.g
    else:  # contribution_biplot: columns scaled so squared coords are contributions
        dec = decompose(table)
        rows = sol.f
        cols = np.sqrt(dec.col_masses)[:, None] * sol.gamma
    return (np.stack([rows[:, ia], rows[:, ib]], axis=1),
            np.stack([cols[:, ia], cols[:, ib]], axis=1))


def _pick(coords: np.ndarray, a: int, b: int, rank: int):
    if rank == 0:
        return 0.0, 0.0
    return float(coords[a - 1]), float(coords[b - 1])


def _svg(pts, sol, a, b, title) -> str:
    xs = [p[0] for p in pts] + [0.0]
    ys = [p[1] for p in pts] + [0.0]
    lo = min(min(xs), min(ys))
    hi = max(max(xs), max(ys))
    span = (hi - lo) or 1.0
    lo -= 0.08 * span
    hi += 0.08 * span
    scale = (_W - 2 * _PAD) / (hi - lo)

    def sx(v: float) -> float:
        return _PAD + (v - lo) * scale

    def sy(v: float) -> float:
        return _W - _PAD - (v - lo) * scale

    def fmt(v: float) -> str:
        return f"{v:.2f}"

    def pct(k: int) -> str:
        if sol.rank == 0 or k > len(sol.inertia_proportions):
            return "0.0"
        return f"{100.0 * sol.inertia_proportions[k - 1]:.1f}"

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_W}" height="{_W}"'
        f' viewBox="0 0 {_W} {_W}" font-family="Helvetica, Arial, sans-serif">',
        f"<title>{_esc(title)}</title>",
        f'<rect x="0" y="0" width="{_W}" height="{_W}" fill="white"/>',
        # axes through the origin
        f'<line x1="{fmt(_PAD)}" y1="{fmt(sy(0.0))}" x2="{fmt(_W - _PAD)}" y2="{fmt(sy(0.0))}"'
        f' stroke="#999999" stroke-width="1"/>',
        f'<line x1="{fmt(sx(0.0))}" y1="{fmt(_PAD)}" x2="{fmt(sx(0.0))}" y2="{fmt(_W - _PAD)}"'
        f' stroke="#999999" stroke-width="1"/>',
        f'<text x="{_W // 2}" y="{_W - 12}" text-anchor="middle" font-size="14">'
        f"Dim {a} ({pct(a)}%)</text>",
        f'<text x="16" y="{_W // 2}" text-anchor="middle" font-size="14"'
        f' transform="rotate(-90 16 {_W // 2})">Dim {b} ({pct(b)}%)</text>',
    ]
    for x, y, label, members, css, shape in pts:
        px, py = sx(x), sy(y)
        color = {"row": _ROW_COLOR, "col": _COL_COLOR}.get(css, _SUP_COLOR)
        tip = _esc(", ".join(members)) if len(members) > 1 else _esc(label)
        if shape == "circle":
            glyph = (f'<circle class="{css}" cx="{fmt(px)}" cy="{fmt(py)}" r="3.5"'
                     f' fill="{color}"><title>{tip}</title></circle>')
        else:
            glyph = (f'<rect class="{css}" x="{fmt(px - 3.2)}" y="{fmt(py - 3.2)}"'
                     f' width="6.4" height="6.4" fill="{color}"><title>{tip}</title></rect>')
        out.append(glyph)
        out.append(
            f'<text x="{fmt(px + 5.0)}" y="{fmt(py - 5.0)}" font-size="11"'
            f' fill="{color}">{_esc(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _esc(text: str) -> str:
    return (text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;"))
