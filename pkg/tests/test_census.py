import pytest
from hypothesis import given, settings, strategies as st

from services.census import (
    CensusReport,
    PreconditionUnmet,
    census,
    generic_sigma_cycles,
    sigma_cycles,
)
from services.models import x
from tests.conftest import E1, ONE_CYCLE, QUICK_SWEEP, SMALL_FUNDAMENTAL


def test_e1_census():
    report = census(E1)
    assert isinstance(report, CensusReport)
    assert report.preprojective_type == (9, 4)
    assert report.coray_tube_families == 3
    assert report.first_type == 3
    assert report.second_type == 2
    assert report.preinjective_types == ()
    assert report.has_ZD_infinity
    assert report.has_ZA_infinity_infinity
    assert (report.M, report.N, report.L) == (5, 2, 0)
    assert report.sigma_cycles == ()


def test_e1_census_json_shape():
    data = census(E1).to_dict()
    assert data["system"] == {"p": [6, 3], "q": [2, 2], "S": [[2, 4, 6, 8], [2]], "T": [[4, 6], []]}
    assert data["preprojective_type"] == [9, 4]
    assert data["sigma_cycles"] == []


def test_one_cycle_census():
    report = census(ONE_CYCLE)
    assert report.preprojective_type == (3, 2)
    assert report.coray_tube_families == 2
    assert (report.first_type, report.second_type) == (0, 1)
    assert report.preinjective_types == ((2, 1),)
    assert report.L == 1
    assert report.has_ZD_infinity
    assert not report.has_ZA_infinity_infinity
    (cycle,) = report.sigma_cycles
    assert (cycle.branch, cycle.start, cycle.vertices) == (1, 2, (x(1, 2),))


def test_one_cycle_matches_structure():
    assert generic_sigma_cycles(ONE_CYCLE) == [frozenset({x(1, 2)})]
    assert [set(c.vertices) for c in sigma_cycles(ONE_CYCLE)] == [{x(1, 2)}]


def test_fundamental_system_is_not_a_crash():
    result = census(SMALL_FUNDAMENTAL)
    assert isinstance(result, PreconditionUnmet)
    assert result.reason.startswith("fundamental/hereditary")
    assert "precondition_unmet" in result.to_dict()


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(QUICK_SWEEP))
def test_census_counts_on_sweep(ds):
    result = census(ds)
    if not any(ds.S):
        assert isinstance(result, PreconditionUnmet)
        return
    assert result.coray_tube_families == result.N + 1
    assert result.first_type + result.second_type == result.M
    assert result.has_ZA_infinity_infinity == (result.N > result.L)
    assert len(result.sigma_cycles) == len(result.preinjective_types) == result.L
    assert result.L <= result.N


@pytest.mark.slow
def test_census_never_raises_on_full_sweep():
    from services.defining_system import enumerate_systems
    from tests.conftest import FULL_BOUNDS

    for ds in enumerate_systems(FULL_BOUNDS):
        census(ds)
