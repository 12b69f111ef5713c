"""Supplementary-points handling of outlying rows and columns.

The flagged rows/columns are removed before fitting, then projected back into
the reduced solution: a supplementary row a lands at (a / sum(a)) @ Gamma and
a supplementary column b at (b / sum(b)) @ Phi, using only retained
categories.  The projections are principal coordinates, so a supplementary
copy of a retained profile lands exactly on that profile's point and the
average profile lands at the origin.  Unlike reconstitution this discards the
non-outlying cells of the removed categories as well.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .core import CASolution, ContingencyTable, fit_ca
from .errors import DegenerateReduction, UnprojectablePoint

@dataclass(frozen=True)
class SupplementarySpec:
    """Labels of the rows and columns to exclude from fitting."""

    sup_rows: frozenset[str]
    sup_cols: frozenset[str]

    @classmethod
    def of(cls, sup_rows: Iterable[str] = (), sup_cols: Iterable[str] = ()) -> "SupplementarySpec":
        return cls(frozenset(str(l) for l in sup_rows), frozenset(str(l) for l in sup_cols))


@dataclass(frozen=True, eq=False)
class SupplementarySolution:
    """CA of the reduced table plus projected coordinates of the removed points."""

    base: CASolution
    sup_row_coords: dict[str, np.ndarray]
    sup_col_coords: dict[str, np.ndarray]
    reduced: ContingencyTable

    @property
    def reduced_shape(self) -> tuple[int, int]:
        return self.reduced.shape


def fit_supplementary(table: ContingencyTable, spec: SupplementarySpec) -> SupplementarySolution:
    """Fit CA without the supplementary rows/columns, then project them back.

    The base solution is computed by the exact same code path as a direct fit
    of the reduced table, so the supplementary points have no effect on it.
    Raises DegenerateReduction if the removal empties a retained margin
    (the offending labels are reported so they can be made supplementary
    too), and UnprojectablePoint for a supplementary point with no mass on
    the retained categories.
    """
    sup_row_idx = sorted(table.row_index(l) for l in spec.sup_rows)
    sup_col_idx = sorted(table.col_index(l) for l in spec.sup_cols)
    keep_rows = [i for i in range(table.shape[0]) if i not in set(sup_row_idx)]
    keep_cols = [j for j in range(table.shape[1]) if j not in set(sup_col_idx)]
    if not keep_rows or not keep_cols:
        raise DegenerateReduction("at least one active row and column must remain")

    reduced_x = table.x[np.ix_(keep_rows, keep_cols)]
    dead_rows = [table.row_labels[keep_rows[i]]
                 for i in np.flatnonzero(reduced_x.sum(axis=1) <= 0)]
    dead_cols = [table.col_labels[keep_cols[j]]
                 for j in np.flatnonzero(reduced_x.sum(axis=0) <= 0)]
    if dead_rows or dead_cols:
        raise DegenerateReduction(
            "removal empties the margin of "
            + " and ".join(
                (["rows " + ", ".join(repr(l) for l in dead_rows)] if dead_rows else [])
                + (["columns " + ", ".join(repr(l) for l in dead_cols)] if dead_cols else []))
            + "; consider making these supplementary as well",
            rows=dead_rows, cols=dead_cols)

    reduced = table.subtable(keep_rows, keep_cols)
    base = fit_ca(reduced)

    row_coords = {}
    for i in sup_row_idx:
        label = table.row_labels[i]
        a = table.x[i, keep_cols]
        total = a.sum()
        if total <= 0:
            raise UnprojectablePoint(
                f"supplementary row {label!r} has no mass on the retained columns",
                label=label)
        row_coords[label] = (a / total) @ base.gamma
    col_coords = {}
    for j in sup_col_idx:
        label = table.col_labels[j]
        b = table.x[np.ix_(keep_rows, [j])][:, 0]
        total = b.sum()
        if total <= 0:
            raise UnprojectablePoint(
                f"supplementary column {label!r} has no mass on the retained rows",
                label=label)
        col_coords[label] = (b / total) @ base.phi

    return SupplementarySolution(
        base=base,
        sup_row_coords=row_coords,
        sup_col_coords=col_coords,
        reduced=reduced,
    )
