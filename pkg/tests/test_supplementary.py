"""Supplementary-points method: reduced fits and projections."""

import numpy as np
import pytest
from pytest import approx

from cellca import (ContingencyTable, DegenerateReduction, SupplementarySpec,
                    UnknownLabel, UnprojectablePoint, duplicate_profile_groups,
                    fit_ca, fit_supplementary)


@pytest.fixture(scope="module")
def car_sup(car_table):
    return fit_supplementary(car_table, SupplementarySpec.of(["Volvo"], ["Safety"]))


def test_car_supplementary_sigma(car_sup):
    assert car_sup.base.sigma[:4] == approx([0.350, 0.179, 0.166, 0.150], abs=2e-3)
    assert 100 * car_sup.base.inertia_proportions[:4] == approx(
        [56.5, 14.9, 12.7, 10.3], abs=0.2)
    assert car_sup.reduced_shape == (38, 6)
    assert set(car_sup.sup_row_coords) == {"Volvo"}
    assert car_sup.sup_row_coords["Volvo"].shape == (car_sup.base.rank,)


def test_ocean_supplementary_sigma(ocean_table):
    sup = fit_supplementary(
        ocean_table, SupplementarySpec.of(["17", "59"], ["Resp.C.I"]))
    assert sup.base.sigma[:4] == approx([0.671, 0.571, 0.544, 0.511], abs=2e-3)
    assert sup.reduced_shape == (79, 20)
    # dropping the supplementary column makes two more documents identical
    groups, _ = duplicate_profile_groups(sup.reduced)
    labeled = {tuple(sup.reduced.row_labels[i] for i in g) for g in groups if len(g) > 1}
    assert ("25", "54") in labeled


def test_base_solution_bitwise_invariant(car_table, car_sup):
    keep_rows = [i for i, l in enumerate(car_table.row_labels) if l != "Volvo"]
    keep_cols = [j for j, l in enumerate(car_table.col_labels) if l != "Safety"]
    direct = fit_ca(car_table.subtable(keep_rows, keep_cols))
    assert np.array_equal(car_sup.base.sigma, direct.sigma)
    assert np.array_equal(car_sup.base.phi, direct.phi)
    assert np.array_equal(car_sup.base.gamma, direct.gamma)


def test_sup_copy_of_retained_row_lands_on_it(car_table):
    # add a supplementary duplicate of Ford: it must land on Ford's point
    x = np.vstack([car_table.x, car_table.x[car_table.row_index("Ford")]])
    t = ContingencyTable(car_table.row_labels + ("Ford-copy",), car_table.col_labels, x)
    sup = fit_supplementary(t, SupplementarySpec.of(["Ford-copy"], []))
    ford = sup.reduced.row_index("Ford")
    assert np.abs(sup.sup_row_coords["Ford-copy"] - sup.base.f[ford]).max() <= 1e-8


def test_average_profile_projects_to_origin(car_table, car_sup):
    reduced = car_sup.reduced
    avg = reduced.x.sum(axis=0)
    proj = (avg / avg.sum()) @ car_sup.base.gamma
    assert np.abs(proj).max() <= 1e-8


def test_projection_matches_direct_arithmetic(car_table, car_sup):
    keep_cols = [j for j, l in enumerate(car_table.col_labels) if l != "Safety"]
    a = car_table.x[car_table.row_index("Volvo"), keep_cols]
    expected = (a / a.sum()) @ car_sup.base.gamma
    assert np.abs(car_sup.sup_row_coords["Volvo"] - expected).max() == 0.0
    b = car_table.x[[i for i, l in enumerate(car_table.row_labels) if l != "Volvo"],
                    car_table.col_index("Safety")]
    expected_col = (b / b.sum()) @ car_sup.base.phi
    assert np.abs(car_sup.sup_col_coords["Safety"] - expected_col).max() == 0.0


def test_projection_scale_invariant(car_table):
    x = np.vstack([car_table.x, 10.0 * car_table.x[0]])
    t = ContingencyTable(car_table.row_labels + ("scaled",), car_table.col_labels, x)
    sup = fit_supplementary(t, SupplementarySpec.of(["scaled"], []))
    base = sup.base.f[sup.reduced.row_index("Acura")]
    assert np.abs(sup.sup_row_coords["scaled"] - base).max() <= 1e-12


def test_degenerate_reduction_and_unprojectable_point():
    # removing column c2 leaves row r2 with no mass: fail loudly, do not drop
    t = ContingencyTable(("r1", "r2", "r3"), ("c1", "c2", "c3"),
                         np.array([[1.0, 2.0, 3.0], [0.0, 5.0, 0.0], [2.0, 1.0, 1.0]]))
    with pytest.raises(DegenerateReduction, match="'r2'") as err:
        fit_supplementary(t, SupplementarySpec.of([], ["c2"]))
    assert err.value.details["rows"] == ["r2"]
    # following the suggestion (making r2 supplementary too) fits the reduced
    # table, but r2 has no retained mass left to project
    with pytest.raises(UnprojectablePoint, match="'r2'"):
        fit_supplementary(t, SupplementarySpec.of(["r2"], ["c2"]))


def test_nothing_left_active():
    t = ContingencyTable(("r1", "r2"), ("c1", "c2"), np.ones((2, 2)))
    with pytest.raises(DegenerateReduction):
        fit_supplementary(t, SupplementarySpec.of(["r1", "r2"], []))


def test_unknown_labels_rejected(car_table):
    with pytest.raises(UnknownLabel):
        fit_supplementary(car_table, SupplementarySpec.of(["NotACar"], []))
