import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from cellca import ContingencyTable, read_table

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture(scope="session")
def car_table() -> ContingencyTable:
    return read_table(DATA_DIR / "car.csv")


@pytest.fixture(scope="session")
def ocean_table() -> ContingencyTable:
    return read_table(DATA_DIR / "ocean_plastic.csv")


@pytest.fixture(scope="session")
def block_table() -> ContingencyTable:
    """4x4 table that reorders to an exact block-diagonal matrix."""
    return ContingencyTable(
        ("1", "2", "3", "4"), ("a", "b", "c", "d"),
        np.array([[1, 0, 3, 4], [0, 2, 0, 0], [2, 0, 5, 1], [4, 0, 6, 1]], float))


@pytest.fixture(scope="session")
def near_block_table() -> ContingencyTable:
    """Approximately block-diagonal variant of the same pattern."""
    return ContingencyTable(
        ("1", "2", "3", "4"), ("a", "b", "c", "d"),
        np.array([[100, 2, 300, 400], [2, 100, 1, 4],
                  [200, 3, 500, 100], [400, 2, 600, 100]], float))


@pytest.fixture(scope="session")
def spike_table() -> ContingencyTable:
    """Small table with one dominating cell value."""
    return ContingencyTable(
        ("1", "2", "3", "4"), ("a", "b", "c", "d"),
        np.array([[1, 2, 3, 4], [2, 100, 1, 4], [2, 3, 5, 1], [4, 2, 6, 1]], float))


def assert_coords_match(actual: np.ndarray, expected: np.ndarray, tol: float,
                        paired: np.ndarray | None = None,
                        paired_expected: np.ndarray | None = None) -> None:
    """Columnwise comparison allowing a joint sign flip per dimension.

    When `paired` is given, the flip chosen for a column of `actual` is
    applied to the same column of `paired` before comparison (standard
    coordinates of rows and columns flip together).
    """
    assert actual.shape == expected.shape
    for k in range(actual.shape[1]):
        direct = np.abs(actual[:, k] - expected[:, k]).max()
        flipped = np.abs(-actual[:, k] - expected[:, k]).max()
        sign = 1.0 if direct <= flipped else -1.0
        assert np.abs(sign * actual[:, k] - expected[:, k]).max() <= tol, (
            f"column {k} deviates beyond {tol}")
        if paired is not None:
            assert np.abs(sign * paired[:, k] - paired_expected[:, k]).max() <= tol, (
                f"paired column {k} inconsistent with the chosen sign")
