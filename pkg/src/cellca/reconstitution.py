"""Iterative imputation of flagged cells by matrix reconstitution.

A flagged cell is treated as missing and refilled so that the h-dimensional
CA of the adjusted table reproduces it exactly.  Order 0 drives the cell to
its independence value x_row * x_col / x_total; order h additionally keeps
the first h dimensions' signal in the cell:

    x[m,n] <- (x[m+] * x[+n] / x[++]) * (1 + sum_{k<=h} phi[m,k] sigma[k] gamma[n,k])

Margins move as the cell moves, so the update is a fixed-point iteration: at
every step the margins (and for h >= 1 a fresh CA of the whole working table)
are recomputed, and all flagged cells are updated simultaneously from the
same state.  After convergence the residual of the flagged cell beyond
dimension h is zero, which removes its pull on the solution while keeping the
rest of its row and column in the analysis.

Order h can converge to a negative value on sparse tables; the
`negative_policy` decides whether that is an error, silently clamped, or (the
default) replaced by an order-0 rerun with an advisory, order 0 being
nonnegative by construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .core import ContingencyTable, CASolution, decompose_matrix, fit_ca, solve
from .errors import (DegenerateCellSet, NegativeImputation, NonConvergence,
                     ZeroMargin)

NEGATIVE_POLICIES = ("error", "fallback_to_order_0", "clamp_to_zero")
INIT_RULES = ("independence", "current")


@dataclass(frozen=True)
class CellSet:
    """Set of (row, column) index pairs flagged as outlying."""

    cells: frozenset[tuple[int, int]]

    @classmethod
    def from_indices(cls, pairs: Iterable[tuple[int, int]]) -> "CellSet":
        cells = frozenset((int(i), int(j)) for i, j in pairs)
        if any(i < 0 or j < 0 for i, j in cells):
            raise ValueError("cell indices must be nonnegative")
        return cls(cells)

    @classmethod
    def from_labels(cls, table: ContingencyTable,
                    pairs: Iterable[tuple[str, str]]) -> "CellSet":
        return cls.from_indices(
            (table.row_index(r), table.col_index(c)) for r, c in pairs)

    def sorted(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(self.cells))

    def __iter__(self):
        return iter(self.sorted())

    def __len__(self) -> int:
        return len(self.cells)

    def __bool__(self) -> bool:
        return bool(self.cells)


@dataclass(frozen=True)
class ReconstitutionConfig:
    """Knobs of the fixed-point iteration.

    init_value is either "independence" (start from the independence value
    computed with the flagged cells zeroed out), "current" (keep the values
    already in the table), or a nonnegative constant.
    """

    order: int = 2
    max_iterations: int = 10_000
    tolerance: float = 1e-8
    init_value: str | float = "independence"
    negative_policy: str = "fallback_to_order_0"

    def __post_init__(self):
        if self.order < 0:
            raise ValueError("order must be >= 0")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.negative_policy not in NEGATIVE_POLICIES:
            raise ValueError(f"negative_policy must be one of {NEGATIVE_POLICIES}")
        if isinstance(self.init_value, str):
            if self.init_value not in INIT_RULES:
                raise ValueError(f"init_value must be one of {INIT_RULES} or a number")
        elif self.init_value < 0:
            raise ValueError("a constant init_value must be nonnegative")


@dataclass(frozen=True, eq=False)
class ReconstitutionResult:
    """Outcome of a reconstitution run.

    Cells not in the flagged set are bitwise-equal to the input table.  When
    the negative-value fallback fired, `order_used` is 0, `fallback_applied`
    is set, and `advisories` explains what happened; `trace` and
    `iterations_used` then describe the effective (order-0) run.
    """

    table: ContingencyTable
    converged_values: Mapping[tuple[int, int], float]
    iterations_used: int
    converged: bool
    trace: tuple[float, ...]
    fallback_applied: bool
    solution: CASolution
    advisories: tuple[str, ...]
    requested_order: int
    order_used: int


def reconstitute(table: ContingencyTable, cells: CellSet,
                 config: ReconstitutionConfig | None = None) -> ReconstitutionResult:
    """Impute every flagged cell and refit the CA of the adjusted table.

    All flagged cells are updated simultaneously each iteration, so the
    result does not depend on their ordering.  Raises DegenerateCellSet when
    a row or column would keep no observed mass outside the flagged cells,
    NonConvergence when the iteration budget runs out, and
    NegativeImputation when a converged value is negative under
    negative_policy="error".
    """
    cfg = config or ReconstitutionConfig()
    flagged = cells.sorted()
    _check_cells(table, flagged)
    n_rows, n_cols = table.shape
    max_order = min(n_rows - 1, n_cols - 1) - 1
    if flagged and cfg.order > max_order:
        raise ValueError(
            f"order {cfg.order} exceeds the maximum {max_order} for a"
            f" {n_rows}x{n_cols} table")

    if not flagged:
        return ReconstitutionResult(
            table=table, converged_values={}, iterations_used=0, converged=True,
            trace=(), fallback_applied=False, solution=fit_ca(table),
            advisories=(), requested_order=cfg.order, order_used=cfg.order)

    advisories: list[str] = []
    fallback = False
    order_used = cfg.order
    try:
        x, trace = _iterate(table, flagged, cfg.order, cfg)
        negative = min(x[i, j] for i, j in flagged) < 0
        failure = None
    except (ZeroMargin, NonConvergence) as exc:
        # an order-h trajectory can push margins nonpositive or oscillate;
        # order 0 cannot (its iterates stay nonnegative)
        if cfg.order == 0 or cfg.negative_policy != "fallback_to_order_0":
            raise
        negative = False
        failure = exc

    if failure is not None:
        advisories.append(
            f"order-{cfg.order} iteration failed ({failure}); fell back to order 0")
        fallback = True
        order_used = 0
        x, trace = _iterate(table, flagged, 0, cfg)
    elif negative:
        worst = min((float(x[i, j]), (i, j)) for i, j in flagged)
        value, (bi, bj) = worst
        where = f"({table.row_labels[bi]!r}, {table.col_labels[bj]!r})"
        if cfg.negative_policy == "error":
            raise NegativeImputation(
                f"order-{cfg.order} reconstitution converged to {value:.6g} at {where}",
                value=value, cell=[table.row_labels[bi], table.col_labels[bj]])
        if cfg.negative_policy == "fallback_to_order_0":
            advisories.append(
                f"order-{cfg.order} reconstitution converged to a negative value"
                f" {value:.6g} at {where}; fell back to order 0")
            fallback = True
            order_used = 0
            x, trace = _iterate(table, flagged, 0, cfg)
        else:  # clamp_to_zero
            advisories.append(
                f"order-{cfg.order} reconstitution converged to a negative value"
                f" {value:.6g} at {where}; clamped to zero")
            for i, j in flagged:
                if x[i, j] < 0:
                    x[i, j] = 0.0

    values = {(i, j): float(x[i, j]) for i, j in flagged}
    imputed = table.replace_entries(x)
    return ReconstitutionResult(
        table=imputed,
        converged_values=values,
        iterations_used=len(trace),
        converged=True,
        trace=tuple(trace),
        fallback_applied=fallback,
        solution=fit_ca(imputed),
        advisories=tuple(advisories),
        requested_order=cfg.order,
        order_used=order_used,
    )


def _check_cells(table: ContingencyTable, flagged) -> None:
    n_rows, n_cols = table.shape
    for i, j in flagged:
        if not (0 <= i < n_rows and 0 <= j < n_cols):
            raise IndexError(f"cell ({i}, {j}) out of range for {n_rows}x{n_cols} table")
    if not flagged:
        return
    masked = table.x.copy()
    for i, j in flagged:
        masked[i, j] = 0.0
    dead_rows = sorted({i for i, _ in flagged if masked[i].sum() <= 0})
    dead_cols = sorted({j for _, j in flagged if masked[:, j].sum() <= 0})
    if dead_rows or dead_cols:
        raise DegenerateCellSet(
            "flagged cells leave no observed mass in "
            + " and ".join(
                (["rows " + ", ".join(repr(table.row_labels[i]) for i in dead_rows)]
                 if dead_rows else [])
                + (["columns " + ", ".join(repr(table.col_labels[j]) for j in dead_cols)]
                   if dead_cols else [])),
            rows=[table.row_labels[i] for i in dead_rows],
            cols=[table.col_labels[j] for j in dead_cols])


def _iterate(table: ContingencyTable, flagged, order: int,
             cfg: ReconstitutionConfig) -> tuple[np.ndarray, list[float]]:
    x = table.x.copy()
    if cfg.init_value == "independence":
        for i, j in flagged:
            x[i, j] = 0.0
        rm, cm, tot = x.sum(axis=1), x.sum(axis=0), x.sum()
        for i, j in flagged:
            x[i, j] = rm[i] * cm[j] / tot
    elif cfg.init_value == "current":
        pass
    else:
        for i, j in flagged:
            x[i, j] = float(cfg.init_value)

    trace: list[float] = []
    for _ in range(cfg.max_iterations):
        rm, cm, tot = x.sum(axis=1), x.sum(axis=0), x.sum()
        if order > 0:
            sol = solve(decompose_matrix(x, table.row_labels, table.col_labels))
            k = min(order, sol.rank)
            sig = sol.sigma[:k]
        change = 0.0
        updates = []
        for i, j in flagged:
            base = rm[i] * cm[j] / tot
            if order > 0:
                base *= 1.0 + float(sol.phi[i, :k] @ (sig * sol.gamma[j, :k]))
            updates.append(base)
            change = max(change, abs(base - x[i, j]))
        for (i, j), value in zip(flagged, updates):
            x[i, j] = value
        trace.append(change)
        if change <= cfg.tolerance:
            return x, trace
    raise NonConvergence(
        f"no convergence after {cfg.max_iterations} iterations"
        f" (last change {trace[-1]:.3g})",
        trace=trace[-20:], iterations=len(trace))


def verify_elimination(result: ReconstitutionResult, cells: CellSet, h: int) -> float:
    """Residual of the flagged cells against their h-dimensional model value.

    Evaluates, on the imputed table's own CA, how far each flagged value is
    from (x_row * x_col / x_total) * (1 + sum_{k<=h} phi sigma gamma).  A
    converged run keeps this within a small multiple of the tolerance; an
    empty cell set trivially returns 0.
    """
    flagged = cells.sorted()
    if not flagged:
        return 0.0
    x = result.table.x
    rm, cm, tot = x.sum(axis=1), x.sum(axis=0), x.sum()
    sol = result.solution
    k = min(h, sol.rank)
    sig = sol.sigma[:k]
    worst = 0.0
    for i, j in flagged:
        model = rm[i] * cm[j] / tot
        if k > 0:
            model *= 1.0 + float(sol.phi[i, :k] @ (sig * sol.gamma[j, :k]))
        worst = max(worst, abs(float(x[i, j]) - model))
    return worst
