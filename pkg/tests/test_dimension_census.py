import numpy as np
import pytest

from conftest import D33
from ppt_forge.dimension_census import (
    RankMismatchError,
    census_table,
    dimension_bound,
    measure_dimension,
    subspace_set_dimension,
)
from ppt_forge.hermitian_core import random_state


@pytest.mark.parametrize("N,m,n,mode,expected", [
    (9, 5, 5, "free", 48),
    (9, 4, 4, "free", 30),
    (9, 4, 4, "fixedImage", -10),
    (9, 5, 5, "fixedImage", 8),
    (9, 9, 9, "free", 80),
    (16, 6, 6, "free", 55),
])
def test_dimension_bound_values(N, m, n, mode, expected):
    assert dimension_bound(N, m, n, mode) == expected


def test_bound_rejects_bad_input():
    with pytest.raises(ValueError):
        dimension_bound(9, 0, 5)
    with pytest.raises(ValueError):
        dimension_bound(9, 5, 5, "loose")


def test_subspace_set_dimension():
    assert subspace_set_dimension(9, 5) == 40
    assert subspace_set_dimension(16, 6) == 120
    assert subspace_set_dimension(9, 9) == 0
    with pytest.raises(ValueError):
        subspace_set_dimension(9, 10)


def test_measured_dimensions_of_rank55_state(state55):
    free = measure_dimension(state55, D33, "free")
    fixed = measure_dimension(state55, D33, "fixedImage")
    assert (free.measured, free.bound, free.rank_pair) == (48, 48, (5, 5)) and free.equality
    assert (fixed.measured, fixed.bound) == (8, 8)
    assert free.raw == free.measured + 1


def test_upb_state_exceeds_its_bound(upb_unit):
    free = measure_dimension(upb_unit, D33, "free")
    fixed = measure_dimension(upb_unit, D33, "fixedImage")
    assert free.measured == 36 and not free.equality
    assert fixed.measured == 0


def test_full_rank_state(rng):
    row = measure_dimension(random_state(9, rng), D33, "free")
    assert row.measured == 80 and row.equality


def test_claimed_rank_checked(state55):
    with pytest.raises(RankMismatchError):
        measure_dimension(state55, D33, expected=(4, 4))
    with pytest.raises(ValueError):
        measure_dimension(state55, D33, mode="sideways")


def test_census_table_order(state55, upb_unit):
    rows = census_table([state55, upb_unit], D33)
    assert [(r.rank_pair, r.mode) for r in rows] == [
        ((5, 5), "free"), ((5, 5), "fixedImage"), ((4, 4), "free"), ((4, 4), "fixedImage")]
    assert census_table([], D33) == []
    assert np.array([r.measured for r in rows]).tolist() == [48, 8, 36, 0]
