"""Inertia decompositions and ranked outlier diagnostics.

The total inertia splits three ways: over cells of the standardized-residual
matrix, over row points, and over column points.  Contributions (the share of
one dimension's inertia carried by a single point) and cell shares are the
quantities an analyst scans to spot outlying points and the cells that cause
them; this module ranks them and also provides the row/column reordering view
that exposes (approximate) block-diagonal structure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (CASolution, ContingencyTable, decompose,
                   duplicate_profile_groups)
from .errors import ShapeError

DEFAULT_POINT_THRESHOLD = 0.50   # advisory: point contribution to one dimension
DEFAULT_CELL_THRESHOLD = 0.05    # advisory: cell share of the total inertia


@dataclass(frozen=True, eq=False)
class InertiaDecomposition:
    """Per-cell, per-point, and per-dimension split of the total inertia.

    Contribution matrices have one column per retained dimension and columns
    summing to one.  Labels, masses, distances to the origin, and
    duplicate-profile groups are carried along so reports can be built
    without going back to the table.
    """

    cell_inertia: np.ndarray          # (p - e)^2 / e
    row_point_inertia: np.ndarray     # mass * f^2, I x rank
    col_point_inertia: np.ndarray     # mass * g^2, J x rank
    row_contrib: np.ndarray           # squared left singular vectors
    col_contrib: np.ndarray           # squared right singular vectors
    cell_share_of_total: np.ndarray
    total_inertia: float
    rank: int
    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]
    row_masses: np.ndarray
    col_masses: np.ndarray
    row_distances: np.ndarray         # chi-squared distance of each profile to the origin
    col_distances: np.ndarray
    row_groups: tuple[tuple[int, ...], ...]
    col_groups: tuple[tuple[int, ...], ...]


def decompose_inertia(table: ContingencyTable, sol: CASolution) -> InertiaDecomposition:
    """Split the total inertia of a fitted table over cells and points."""
    n_rows, n_cols = table.shape
    if sol.phi.shape[0] != n_rows or sol.gamma.shape[0] != n_cols:
        raise ShapeError(
            f"solution shaped {sol.phi.shape[0]}x{sol.gamma.shape[0]} does not"
            f" match table shaped {n_rows}x{n_cols}"
        )
    dec = decompose(table)
    cell = (dec.p - dec.e) ** 2 / dec.e
    r = dec.row_masses
    c = dec.col_masses
    row_pt = r[:, None] * sol.f ** 2
    col_pt = c[:, None] * sol.g ** 2
    row_contrib = r[:, None] * sol.phi ** 2
    col_contrib = c[:, None] * sol.gamma ** 2
    total = sol.total_inertia
    share = cell / total if total > 0 else np.zeros_like(cell)
    row_groups, col_groups = duplicate_profile_groups(table)
    return InertiaDecomposition(
        cell_inertia=cell,
        row_point_inertia=row_pt,
        col_point_inertia=col_pt,
        row_contrib=row_contrib,
        col_contrib=col_contrib,
        cell_share_of_total=share,
        total_inertia=total,
        rank=sol.rank,
        row_labels=table.row_labels,
        col_labels=table.col_labels,
        row_masses=r,
        col_masses=c,
        row_distances=np.sqrt((sol.f ** 2).sum(axis=1)),
        col_distances=np.sqrt((sol.g ** 2).sum(axis=1)),
        row_groups=row_groups,
        col_groups=col_groups,
    )


@dataclass(frozen=True)
class PointRecord:
    """One row or column point ranked on a single dimension."""

    label: str
    members: tuple[str, ...]      # labels sharing this exact profile
    mass: float
    distance: float
    contribution: float           # share of the ranking dimension's inertia
    contributions: tuple[float, ...]
    flagged: bool


@dataclass(frozen=True)
class CellRecord:
    """One cell (possibly a collapsed duplicate-profile group of cells)."""

    row_label: str
    col_label: str
    row_members: tuple[str, ...]
    col_members: tuple[str, ...]
    share: float                  # of the total inertia
    flagged: bool


@dataclass(frozen=True)
class GroupRecord:
    """A duplicate-profile group with its joint mass and contributions."""

    label: str
    members: tuple[str, ...]
    mass: float
    distance: float
    contributions: tuple[float, ...]
    flagged_dims: tuple[int, ...]


@dataclass(frozen=True)
class OutlierReport:
    """Ranked candidates for outlying points and cells.

    Rankings are deterministic: descending by the relevant share with ties
    resolved by original table order.  The thresholds are advisory defaults
    only; every record is reported regardless, with `flagged` marking the
    ones that exceed them.
    """

    top_n: int
    point_threshold: float
    cell_threshold: float
    row_points: dict[int, tuple[PointRecord, ...]]    # keyed by 1-based dimension
    col_points: dict[int, tuple[PointRecord, ...]]
    cells: tuple[CellRecord, ...]
    grouped_cells: tuple[CellRecord, ...]
    profile_groups: dict[str, tuple[GroupRecord, ...]]

    def to_dict(self) -> dict:
        def pct(v: float) -> float:
            return round(100.0 * v, 1)

        def point(rec: PointRecord) -> dict:
            return {
                "label": rec.label,
                "members": list(rec.members),
                "mass": rec.mass,
                "distance": rec.distance,
                "contribution_pct": pct(rec.contribution),
                "flagged": rec.flagged,
            }

        def cell(rec: CellRecord) -> dict:
            return {
                "row": rec.row_label,
                "col": rec.col_label,
                "row_members": list(rec.row_members),
                "col_members": list(rec.col_members),
                "share_pct": pct(rec.share),
                "flagged": rec.flagged,
            }

        def group(rec: GroupRecord) -> dict:
            return {
                "label": rec.label,
                "members": list(rec.members),
                "mass": rec.mass,
                "distance": rec.distance,
                "contributions_pct": [pct(v) for v in rec.contributions],
                "flagged_dims": list(rec.flagged_dims),
            }

        return {
            "top_n": self.top_n,
            "point_threshold_pct": pct(self.point_threshold),
            "cell_threshold_pct": pct(self.cell_threshold),
            "row_points": {str(d): [point(r) for r in recs] for d, recs in self.row_points.items()},
            "col_points": {str(d): [point(r) for r in recs] for d, recs in self.col_points.items()},
            "cells": [cell(r) for r in self.cells],
            "grouped_cells": [cell(r) for r in self.grouped_cells],
            "profile_groups": {
                axis: [group(r) for r in recs] for axis, recs in self.profile_groups.items()
            },
        }


def outlier_report(dec: InertiaDecomposition, top_n: int = 5, *,
                   point_threshold: float = DEFAULT_POINT_THRESHOLD,
                   cell_threshold: float = DEFAULT_CELL_THRESHOLD) -> OutlierReport:
    """Rank points by per-dimension contribution and cells by inertia share.

    Individual points and cells are always listed; duplicate-profile groups
    are additionally reported jointly (their members occupy one position, so
    their contributions act as one point).  A table with no non-null
    dimensions yields an empty report.
    """
    if top_n < 1:
        raise ValueError("top_n must be at least 1")
    if dec.rank == 0:
        return OutlierReport(top_n, point_threshold, cell_threshold,
                             {}, {}, (), (), {"rows": (), "cols": ()})

    row_points = {}
    col_points = {}
    for k in range(dec.rank):
        row_points[k + 1] = _rank_points(
            dec.row_labels, dec.row_masses, dec.row_distances, dec.row_contrib,
            k, top_n, point_threshold)
        col_points[k + 1] = _rank_points(
            dec.col_labels, dec.col_masses, dec.col_distances, dec.col_contrib,
            k, top_n, point_threshold)

    cells = _rank_cells(dec, top_n, cell_threshold)
    grouped_cells = _rank_grouped_cells(dec, top_n, cell_threshold)
    groups = {
        "rows": _group_records(dec.row_groups, dec.row_labels, dec.row_masses,
                               dec.row_distances, dec.row_contrib, point_threshold),
        "cols": _group_records(dec.col_groups, dec.col_labels, dec.col_masses,
                               dec.col_distances, dec.col_contrib, point_threshold),
    }
    return OutlierReport(
        top_n=top_n,
        point_threshold=point_threshold,
        cell_threshold=cell_threshold,
        row_points=row_points,
        col_points=col_points,
        cells=cells,
        grouped_cells=grouped_cells,
        profile_groups=groups,
    )


def _rank_points(labels, masses, distances, contrib, k, top_n, threshold):
    order = np.argsort(-contrib[:, k], kind="stable")[:top_n]
    return tuple(
        PointRecord(
            label=labels[i],
            members=(labels[i],),
            mass=float(masses[i]),
            distance=float(distances[i]),
            contribution=float(contrib[i, k]),
            contributions=tuple(float(v) for v in contrib[i]),
            flagged=bool(contrib[i, k] > threshold),
        )
        for i in order
    )


def _rank_cells(dec, top_n, threshold):
    share = dec.cell_share_of_total
    flat = np.argsort(-share, axis=None, kind="stable")[:top_n]
    records = []
    for pos in flat:
        i, j = np.unravel_index(int(pos), share.shape)
        records.append(CellRecord(
            row_label=dec.row_labels[i], col_label=dec.col_labels[j],
            row_members=(dec.row_labels[i],), col_members=(dec.col_labels[j],),
            share=float(share[i, j]),
            flagged=bool(share[i, j] > threshold),
        ))
    return tuple(records)


def _rank_grouped_cells(dec, top_n, threshold):
    rg = dec.row_groups
    cg = dec.col_groups
    share = np.zeros((len(rg), len(cg)))
    for a, rows in enumerate(rg):
        for b, cols in enumerate(cg):
            share[a, b] = dec.cell_share_of_total[np.ix_(rows, cols)].sum()
    flat = np.argsort(-share, axis=None, kind="stable")[:top_n]
    records = []
    for pos in flat:
        a, b = np.unravel_index(int(pos), share.shape)
        records.append(CellRecord(
            row_label=dec.row_labels[rg[a][0]], col_label=dec.col_labels[cg[b][0]],
            row_members=tuple(dec.row_labels[i] for i in rg[a]),
            col_members=tuple(dec.col_labels[j] for j in cg[b]),
            share=float(share[a, b]),
            flagged=bool(share[a, b] > threshold),
        ))
    return tuple(records)


def _group_records(groups, labels, masses, distances, contrib, threshold):
    records = []
    for members in groups:
        if len(members) < 2:
            continue
        joint = contrib[list(members)].sum(axis=0)
        records.append(GroupRecord(
            label=labels[members[0]],
            members=tuple(labels[i] for i in members),
            mass=float(masses[list(members)].sum()),
            distance=float(distances[members[0]]),
            contributions=tuple(float(v) for v in joint),
            flagged_dims=tuple(int(k + 1) for k in np.flatnonzero(joint > threshold)),
        ))
    return tuple(records)


def reorder_by_dimension(table: ContingencyTable, sol: CASolution, dim: int) -> ContingencyTable:
    """Permute rows and columns by their standard coordinate on one dimension.

    Sorting is ascending with ties kept in original order; `dim` is 1-based.
    Because the sign of a CA dimension is arbitrary, the dimension is first
    oriented so that the mass-weighted majority of row points sits on the
    nonnegative side; the deviating minority (the candidate outlier block)
    then sorts to the front.  A (near) block-diagonal table reordered on
    dimension 1 makes the blocks visible.
    """
    if not 1 <= dim <= sol.rank:
        raise IndexError(f"dimension {dim} out of range for rank {sol.rank}")
    phi_k = sol.phi[:, dim - 1]
    gamma_k = sol.gamma[:, dim - 1]
    masses = table.x.sum(axis=1) / table.x.sum()
    if float(masses @ np.sign(phi_k)) < 0.0:
        phi_k = -phi_k
        gamma_k = -gamma_k
    row_order = np.argsort(phi_k, kind="stable")
    col_order = np.argsort(gamma_k, kind="stable")
    return table.permute(list(row_order), list(col_order))
