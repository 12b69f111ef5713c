"""Correspondence analysis with cell-wise outlier handling.

Fit the CA of a contingency/incidence table, decompose its inertia to find
outlying points and the cells that cause them, then either impute those cells
by iterative reconstitution or set whole rows/columns supplementary, and
render the resulting maps.
"""

from .core import (CASolution, ContingencyTable, CorrespondenceDecomposition,
                   chi2_distance_cols, chi2_distance_rows, decompose,
                   duplicate_profile_groups, fit_ca, verify_transition)
from .diagnostics import (InertiaDecomposition, OutlierReport,
                          decompose_inertia, outlier_report,
                          reorder_by_dimension)
from .errors import (CellcaError, DegenerateCellSet, DegenerateReduction,
                     InvalidMatrix, NegativeImputation, NonConvergence,
                     ParseError, ShapeError, UnknownLabel, UnprojectablePoint,
                     ZeroMargin)
from .io import (dump_solution, load_solution, parse_table, read_table,
                 render_map, write_solution, write_table)
from .linalg import SvdFactorization, svd
from .reconstitution import (CellSet, ReconstitutionConfig,
                             ReconstitutionResult, reconstitute,
                             verify_elimination)
from .supplementary import (SupplementarySolution, SupplementarySpec,
                            fit_supplementary)

__version__ = "0.1.0"

__all__ = [
    "CASolution", "CellSet", "CellcaError", "ContingencyTable",
    "CorrespondenceDecomposition", "DegenerateCellSet", "DegenerateReduction",
    "InertiaDecomposition", "InvalidMatrix", "NegativeImputation",
    "NonConvergence", "OutlierReport", "ParseError", "ReconstitutionConfig",
    "ReconstitutionResult", "ShapeError", "SupplementarySolution",
    "SupplementarySpec", "SvdFactorization", "UnknownLabel",
    "UnprojectablePoint", "ZeroMargin", "chi2_distance_cols",
    "chi2_distance_rows", "decompose", "decompose_inertia",
    "dump_solution", "duplicate_profile_groups", "fit_ca",
    "fit_supplementary", "load_solution", "outlier_report", "parse_table",
    "read_table", "reconstitute", "render_map", "reorder_by_dimension",
    "svd", "verify_elimination", "verify_transition", "write_solution",
    "write_table",
]
