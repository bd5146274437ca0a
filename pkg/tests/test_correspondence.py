import pytest
from hypothesis import given, settings, strategies as st

from services import comb_structure as cst
from services.correspondence import (
    admissible_lemma,
    ancestry,
    closed_form_mismatches,
    cross_check_extension,
    derive_structure,
    extend_ds,
    fundamental_of,
    replay,
    structure_diff,
    weight,
)
from services.defining_system import DefiningSystem, EnumerationBounds, enumerate_systems, validate
from services.errors import PreconditionError
from services.models import x, z
from tests.conftest import E1, FULL_BOUNDS, ONE_CYCLE, QUICK_SWEEP, SMALL_FUNDAMENTAL


def test_e1_structure_sizes():
    cs = derive_structure(E1).structure
    assert len(cs.I) == 16
    assert len(cs.phi) == 9
    assert cs.rho.domain == {x(1, 1), x(1, 3), x(1, 5), x(1, 7), x(2, 1)}
    assert cs.psi.domain == {x(1, 4), x(2, 0)}
    assert x(1, 8) not in cs.I
    assert all(v.kind == "z" for v in cs.rho.image)


def test_e1_weights():
    cs = derive_structure(E1).structure
    negative = {v for v, w in cs.l.items() if w}
    assert negative == {x(1, 1), x(2, 1), x(1, 5), x(1, 7)}
    assert all(cs.l[v] == -2 for v in negative)
    assert weight(E1, z(1, 2)) == 0


def test_derived_structure_is_cached():
    assert derive_structure(E1) is derive_structure(E1)
    assert derive_structure(E1).x_indices == {v for v in derive_structure(E1).structure.I if v.kind == "x"}


def test_e1_admissible_indices():
    expected = {z(1, 8), z(2, 2)}
    assert admissible_lemma(E1) == expected
    assert cst.admissible_set(derive_structure(E1).structure) == expected


@pytest.mark.parametrize(
    "index, S, T, new_index",
    [
        (z(1, 8), ((2, 4, 6, 8), (2,)), ((4, 6, 8), ()), x(1, 8)),
        (z(2, 2), ((2, 4, 6, 8), (2,)), ((4, 6), (2,)), x(2, 3)),
    ],
)
def test_e1_extensions(index, S, T, new_index):
    step = extend_ds(E1, index)
    assert step.system == DefiningSystem(p=(6, 3), q=(2, 2), S=S, T=T)
    assert step.new_index == new_index
    assert validate(step.system).ok
    assert cross_check_extension(E1, index)


def test_extension_by_x_index_adds_to_s():
    step = extend_ds(SMALL_FUNDAMENTAL, x(1, 1))
    assert step.system == DefiningSystem(p=(2, 1), q=(1, 1), S=((2,), ()), T=((), ()))
    assert step.new_index == z(1, 2)
    assert step.to_dict()["new_index"] == "z_1_2"


@pytest.mark.parametrize(
    "index, clause",
    [
        (x(1, 3), "x ∈ Im 𝔓𝔖"),
        (x(1, 0), "x ∈ 𝔵₀"),
        (x(1, 2), "x ∈ Im 𝔖"),
        (z(1, 4), "z ∈ Im 𝔗"),
    ],
)
def test_inadmissible_index_names_the_clause(index, clause):
    with pytest.raises(PreconditionError) as exc:
        extend_ds(E1, index)
    assert exc.value.clause == clause


def test_short_z_index_is_rejected():
    # h(𝔖z) = 2 не достигает верхушки ветви
    with pytest.raises(PreconditionError) as exc:
        extend_ds(E1, z(1, 2))
    assert exc.value.clause.startswith("h(𝔖z)")


def test_structure_diff_reports_changes():
    before = derive_structure(E1).structure
    after = derive_structure(extend_ds(E1, z(2, 2)).system).structure
    diff = structure_diff(before, after)
    assert diff
    assert diff[0].startswith("I:")
    assert structure_diff(before, before) == ()


def test_e1_ancestry_and_replay():
    chain = ancestry(E1)
    assert len(chain) == 7
    assert chain[-1].system == E1
    assert replay(fundamental_of(E1), chain) == E1
    assert all(validate(step.system).ok for step in chain)


def test_ancestry_of_fundamental_system_is_empty():
    assert ancestry(SMALL_FUNDAMENTAL) == ()
    assert fundamental_of(ONE_CYCLE) == SMALL_FUNDAMENTAL


def test_e1_closed_forms_agree():
    assert closed_form_mismatches(E1) == []


def _check_system(ds):
    cs = derive_structure(ds).structure
    assert cs.axioms.ok, cs.axioms.failed()
    assert cst.admissible_set(cs) == admissible_lemma(ds)
    for y in sorted(admissible_lemma(ds)):
        result = cross_check_extension(ds, y)
        assert result.ok, result.diff
    assert closed_form_mismatches(ds) == []
    chain = ancestry(ds)
    assert replay(fundamental_of(ds), chain) == ds


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(QUICK_SWEEP))
def test_correspondence_on_quick_sweep(ds):
    _check_system(ds)


@pytest.mark.slow
def test_correspondence_on_full_sweep():
    for ds in enumerate_systems(FULL_BOUNDS):
        _check_system(ds)


@pytest.mark.slow
def test_correspondence_on_three_branches():
    for ds in enumerate_systems(EnumerationBounds(max_n=3, max_p=3, max_q=1, max_t=1)):
        if ds.n == 3:
            _check_system(ds)
