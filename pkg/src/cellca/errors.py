"""Exception types shared across the toolkit.

Every error carries a JSON-friendly payload so the CLI and the HTTP service
can report diagnostics without string parsing.
"""

from __future__ import annotations


class CellcaError(Exception):
    """Base class for all toolkit errors."""

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.details = details

    def payload(self) -> dict:
        return {"error": type(self).__name__, "detail": str(self), **self.details}


class InvalidMatrix(CellcaError):
    """Matrix input contains NaN/Inf or has an unusable shape."""


class ShapeError(CellcaError):
    """Dimensions of two related objects do not match."""


class ZeroMargin(CellcaError):
    """A row or column margin is zero, so profiles are undefined."""


class ParseError(CellcaError):
    """Malformed table file; details carry line/column positions."""


class UnknownLabel(CellcaError, KeyError):
    """A row or column label does not occur in the table."""

    def __str__(self) -> str:  # KeyError would repr() the message
        return self.args[0]


class DegenerateCellSet(CellcaError):
    """Flagged cells leave some row or column without observed mass."""


class NegativeImputation(CellcaError):
    """Reconstitution converged to a negative cell value."""


class NonConvergence(CellcaError):
    """Iteration exhausted its budget; details carry the change trace."""


class DegenerateReduction(CellcaError):
    """Removing supplementary rows/columns empties a margin."""


class UnprojectablePoint(CellcaError):
    """A supplementary point has no mass on the retained categories."""
