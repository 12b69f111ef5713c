"""Correspondence analysis of two-way contingency and incidence tables.

The computation follows the classical chain: rescale the table so it sums to
one, form standardized residuals against the independence expectation, factor
them with the SVD, and rescale the singular vectors by the margins to obtain
standard coordinates (weighted mean 0, weighted sum of squares 1 per
dimension) and principal coordinates (standard coordinates scaled by the
singular values, whose Euclidean geometry reproduces chi-squared distances
between profiles).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import ShapeError, UnknownLabel, ZeroMargin
from .linalg import svd

# Dimensions whose singular value falls below this fraction of the leading one
# carry no usable geometry; coordinates are not produced for them.
NULL_DIM_RTOL = 1e-10
# Absolute floor under which the leading singular value itself counts as zero
# (the table is indistinguishable from exact independence).
RANK_ZERO_ATOL = 1e-12


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class ContingencyTable:
    """Labeled nonnegative table with strictly positive margins.

    Construction rejects negative or non-finite entries, duplicate labels,
    and zero-margin rows or columns (profiles would be undefined there).
    """

    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]
    x: np.ndarray

    def __post_init__(self):
        rows = tuple(str(l) for l in self.row_labels)
        cols = tuple(str(l) for l in self.col_labels)
        if len(set(rows)) != len(rows):
            dup = next(l for l in rows if rows.count(l) > 1)
            raise ValueError(f"duplicate row label {dup!r}")
        if len(set(cols)) != len(cols):
            dup = next(l for l in cols if cols.count(l) > 1)
            raise ValueError(f"duplicate column label {dup!r}")
        x = np.array(self.x, dtype=float)
        if x.ndim != 2:
            raise ShapeError(f"table entries must be 2-D, got {x.ndim}-D")
        if x.shape != (len(rows), len(cols)):
            raise ShapeError(
                f"entry shape {x.shape} does not match {len(rows)} row / {len(cols)} column labels"
            )
        if not np.all(np.isfinite(x)):
            raise ValueError("table entries must be finite")
        if x.min() < 0:
            i, j = np.unravel_index(int(np.argmin(x)), x.shape)
            raise ValueError(f"negative entry {x[i, j]} at ({rows[i]!r}, {cols[j]!r})")
        zero_rows = [rows[i] for i in np.flatnonzero(x.sum(axis=1) <= 0)]
        zero_cols = [cols[j] for j in np.flatnonzero(x.sum(axis=0) <= 0)]
        if zero_rows or zero_cols:
            parts = []
            if zero_rows:
                parts.append("rows " + ", ".join(repr(l) for l in zero_rows))
            if zero_cols:
                parts.append("columns " + ", ".join(repr(l) for l in zero_cols))
            raise ZeroMargin(
                "zero margin in " + " and ".join(parts),
                rows=zero_rows, cols=zero_cols,
            )
        object.__setattr__(self, "row_labels", rows)
        object.__setattr__(self, "col_labels", cols)
        object.__setattr__(self, "x", _frozen(x))

    @property
    def shape(self) -> tuple[int, int]:
        return self.x.shape

    @property
    def grand_total(self) -> float:
        return float(self.x.sum())

    @cached_property
    def _row_map(self) -> dict[str, int]:
        return {l: i for i, l in enumerate(self.row_labels)}

    @cached_property
    def _col_map(self) -> dict[str, int]:
        return {l: j for j, l in enumerate(self.col_labels)}

    def row_index(self, label: str) -> int:
        try:
            return self._row_map[label]
        except KeyError:
            raise UnknownLabel(f"unknown row label {label!r}", label=label) from None

    def col_index(self, label: str) -> int:
        try:
            return self._col_map[label]
        except KeyError:
            raise UnknownLabel(f"unknown column label {label!r}", label=label) from None

    def replace_entries(self, x: np.ndarray) -> "ContingencyTable":
        """Same labels, new entries."""
        return ContingencyTable(self.row_labels, self.col_labels, x)

    def permute(self, row_order: Sequence[int], col_order: Sequence[int]) -> "ContingencyTable":
        ro = list(row_order)
        co = list(col_order)
        if sorted(ro) != list(range(self.shape[0])) or sorted(co) != list(range(self.shape[1])):
            raise ValueError("orders must be permutations of the table indices")
        return ContingencyTable(
            tuple(self.row_labels[i] for i in ro),
            tuple(self.col_labels[j] for j in co),
            self.x[np.ix_(ro, co)],
        )

    def subtable(self, keep_rows: Sequence[int], keep_cols: Sequence[int]) -> "ContingencyTable":
        return ContingencyTable(
            tuple(self.row_labels[i] for i in keep_rows),
            tuple(self.col_labels[j] for j in keep_cols),
            self.x[np.ix_(list(keep_rows), list(keep_cols))],
        )


@dataclass(frozen=True, eq=False)
class CorrespondenceDecomposition:
    """Correspondence matrix with its margins and standardized residuals."""

    p: np.ndarray            # table rescaled to sum 1
    row_masses: np.ndarray
    col_masses: np.ndarray
    e: np.ndarray            # independence expectations, outer(row, col) masses
    s: np.ndarray            # (p - e) / sqrt(e)

    @property
    def shape(self) -> tuple[int, int]:
        return self.p.shape


@dataclass(frozen=True, eq=False)
class CASolution:
    """Coordinates and inertia of a fitted correspondence analysis.

    sigma reports every singular value up to the structural maximum
    min(I-1, J-1); trailing values below NULL_DIM_RTOL * sigma[0] are
    numerically null and carry no coordinates, so phi/gamma/f/g have exactly
    `rank` columns.  A table indistinguishable from independence yields
    rank 0 with empty sigma.
    """

    sigma: np.ndarray
    phi: np.ndarray                 # row standard coordinates, I x rank
    gamma: np.ndarray               # column standard coordinates, J x rank
    f: np.ndarray                   # row principal coordinates, phi * sigma
    g: np.ndarray                   # column principal coordinates, gamma * sigma
    total_inertia: float
    inertia_proportions: np.ndarray
    rank: int

    @property
    def rank_zero(self) -> bool:
        return self.rank == 0


def decompose_matrix(x: np.ndarray, row_names=None, col_names=None) -> CorrespondenceDecomposition:
    """Correspondence decomposition of a raw matrix with positive margins.

    Low-level entry point: entries may be slightly negative (intermediate
    states of the reconstitution iteration), but every margin must stay
    strictly positive.
    """
    x = np.asarray(x, dtype=float)
    total = x.sum()
    if not total > 0:
        raise ZeroMargin("table total is not positive")
    p = x / total
    r = p.sum(axis=1)
    c = p.sum(axis=0)
    bad_rows = np.flatnonzero(r <= 0)
    bad_cols = np.flatnonzero(c <= 0)
    if bad_rows.size or bad_cols.size:
        rn = [str(row_names[i]) if row_names else str(i) for i in bad_rows]
        cn = [str(col_names[j]) if col_names else str(j) for j in bad_cols]
        raise ZeroMargin(
            "margins must be positive; offending "
            + ", ".join((["rows: " + ", ".join(rn)] if rn else [])
                        + (["columns: " + ", ".join(cn)] if cn else [])),
            rows=rn, cols=cn,
        )
    e = np.outer(r, c)
    s = (p - e) / np.sqrt(e)
    return CorrespondenceDecomposition(
        p=_frozen(p), row_masses=_frozen(r), col_masses=_frozen(c),
        e=_frozen(e), s=_frozen(s),
    )


def decompose(table: ContingencyTable) -> CorrespondenceDecomposition:
    """Correspondence decomposition of a validated table."""
    return decompose_matrix(table.x, table.row_labels, table.col_labels)


def solve(dec: CorrespondenceDecomposition) -> CASolution:
    """Fit the CA coordinates from a correspondence decomposition."""
    n_rows, n_cols = dec.shape
    kmax = min(n_rows - 1, n_cols - 1)
    if kmax == 0:
        return _rank_zero_solution(n_rows, n_cols)

    fact = svd(dec.s)
    sigma = np.array(fact.sigma[:kmax])
    if sigma[0] <= RANK_ZERO_ATOL:
        return _rank_zero_solution(n_rows, n_cols)
    rank = int(np.count_nonzero(sigma >= NULL_DIM_RTOL * sigma[0]))

    phi = fact.u[:, :rank] / np.sqrt(dec.row_masses)[:, None]
    gamma = fact.v[:, :rank] / np.sqrt(dec.col_masses)[:, None]
    f = phi * sigma[:rank]
    g = gamma * sigma[:rank]
    total = float((sigma ** 2).sum())
    return CASolution(
        sigma=_frozen(sigma),
        phi=_frozen(phi), gamma=_frozen(gamma), f=_frozen(f), g=_frozen(g),
        total_inertia=total,
        inertia_proportions=_frozen(sigma ** 2 / total),
        rank=rank,
    )


def _rank_zero_solution(n_rows: int, n_cols: int) -> CASolution:
    empty = np.zeros(0)
    return CASolution(
        sigma=_frozen(empty),
        phi=_frozen(np.zeros((n_rows, 0))), gamma=_frozen(np.zeros((n_cols, 0))),
        f=_frozen(np.zeros((n_rows, 0))), g=_frozen(np.zeros((n_cols, 0))),
        total_inertia=0.0,
        inertia_proportions=_frozen(empty),
        rank=0,
    )


def fit_ca(table: ContingencyTable) -> CASolution:
    """Full correspondence analysis of a table."""
    return solve(decompose(table))


def _check_row(dec: CorrespondenceDecomposition, i: int) -> None:
    if not 0 <= i < dec.shape[0]:
        raise IndexError(f"row index {i} out of range for {dec.shape[0]} rows")


def _check_col(dec: CorrespondenceDecomposition, j: int) -> None:
    if not 0 <= j < dec.shape[1]:
        raise IndexError(f"column index {j} out of range for {dec.shape[1]} columns")


def chi2_distance_rows(dec: CorrespondenceDecomposition, i: int, i2: int) -> float:
    """Chi-squared distance between two row profiles."""
    _check_row(dec, i)
    _check_row(dec, i2)
    prof_i = dec.p[i] / dec.row_masses[i]
    prof_i2 = dec.p[i2] / dec.row_masses[i2]
    return float(np.sqrt(((prof_i - prof_i2) ** 2 / dec.col_masses).sum()))


def chi2_distance_cols(dec: CorrespondenceDecomposition, j: int, j2: int) -> float:
    """Chi-squared distance between two column profiles."""
    _check_col(dec, j)
    _check_col(dec, j2)
    prof_j = dec.p[:, j] / dec.col_masses[j]
    prof_j2 = dec.p[:, j2] / dec.col_masses[j2]
    return float(np.sqrt(((prof_j - prof_j2) ** 2 / dec.row_masses).sum()))


def verify_transition(sol: CASolution, dec: CorrespondenceDecomposition) -> float:
    """Largest deviation from the transition equations.

    Principal coordinates must be the mass-weighted averages of the other
    side's standard coordinates: F = Dr^-1 P Gamma and G = Dc^-1 P^T Phi.
    Returns the max elementwise deviation over both identities.
    """
    if sol.phi.shape[0] != dec.shape[0] or sol.gamma.shape[0] != dec.shape[1]:
        raise ShapeError(
            f"solution for {sol.phi.shape[0]}x{sol.gamma.shape[0]} table cannot be"
            f" checked against a {dec.shape[0]}x{dec.shape[1]} decomposition"
        )
    if sol.rank == 0:
        return 0.0
    f_hat = (dec.p / dec.row_masses[:, None]) @ sol.gamma
    g_hat = (dec.p.T / dec.col_masses[:, None]) @ sol.phi
    return float(max(np.abs(sol.f - f_hat).max(), np.abs(sol.g - g_hat).max()))


def duplicate_profile_groups(table: ContingencyTable) -> tuple[tuple[tuple[int, ...], ...],
                                                               tuple[tuple[int, ...], ...]]:
    """Group rows (and columns) whose profiles coincide exactly.

    Profile equality is decided by cross-multiplication of raw entries, which
    is exact for count data; such points share one position in every map.
    Returns (row_groups, col_groups), each a tuple of index tuples covering
    all indices in original order (singletons included).
    """
    return _groups(table.x), _groups(table.x.T)


def _groups(x: np.ndarray) -> tuple[tuple[int, ...], ...]:
    sums = x.sum(axis=1)
    n = x.shape[0]
    taken = np.zeros(n, dtype=bool)
    groups = []
    for i in range(n):
        if taken[i]:
            continue
        members = [i]
        taken[i] = True
        for j in range(i + 1, n):
            if not taken[j] and np.array_equal(x[i] * sums[j], x[j] * sums[i]):
                members.append(j)
                taken[j] = True
        groups.append(tuple(members))
    return tuple(groups)
