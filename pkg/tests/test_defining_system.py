import json

import pytest
from hypothesis import given, strategies as st

from services.defining_system import (
    DefiningSystem,
    EnumerationBounds,
    enumerate_systems,
    is_fundamental,
    parse,
    serialize,
    validate,
)
from services.errors import InvalidSystemError, ParseError, PreconditionError
from tests.conftest import E1, QUICK_SWEEP

E1_JSON = '{"p":[6,3],"q":[2,2],"S":[[2,4,6,8],[2]],"T":[[4,6],[]]}'


def test_parse_e1():
    ds = parse(E1_JSON)
    assert ds == E1
    assert ds.n == 2
    assert ds.top(1) == 8
    assert ds.top(2) == 3


def test_serialize_is_canonical_compact_json():
    assert serialize(E1) == E1_JSON
    assert str(E1) == E1_JSON


def test_parse_accepts_whitespace_and_key_order():
    text = json.dumps({"T": [[4, 6], []], "S": [[2, 4, 6, 8], [2]], "q": [2, 2], "p": [6, 3]}, indent=4)
    assert parse(text) == E1


def test_cyclic_branch_access():
    assert E1.p_at(3) == E1.p_at(1)
    assert E1.q_at(0) == E1.q_at(2)
    assert E1.wrap(3) == 1


def test_broken_json_reports_position():
    with pytest.raises(ParseError) as exc:
        parse('{"p": [6, 3],\n "q": }')
    assert exc.value.line == 2
    assert exc.value.column is not None


@pytest.mark.parametrize(
    "payload",
    [
        {"p": [2], "q": [1], "S": [[]]},
        {"p": [2], "q": [1], "S": [[]], "T": [[]], "extra": 1},
        {"p": [2, 1], "q": [1], "S": [[], []], "T": [[], []]},
        {"p": [0, 2], "q": [1, 1], "S": [[], []], "T": [[], []]},
        {"p": [3], "q": [1], "S": [[3, 2]], "T": [[]]},
        {"p": [], "q": [], "S": [], "T": []},
        {"p": ["2"], "q": [1], "S": [[]], "T": [[]]},
    ],
)
def test_schema_violations_are_parse_errors(payload):
    with pytest.raises(ParseError):
        parse(json.dumps(payload))


@pytest.mark.parametrize(
    "text, line, column",
    [
        ('{"p": [2],\n "q": [1],\n "S": [[]], "T": [[]],\n  "extra": 1}', 4, 3),
        ('{\n "q": [1],\n "p": ["2"],\n "S": [[]], "T": [[]]}', 3, 2),
        ('\n\n  {"p": [2], "q": [1], "S": [[]]}', 3, 3),
    ],
)
def test_schema_violation_reports_key_position(text, line, column):
    with pytest.raises(ParseError) as exc:
        parse(text)
    assert (exc.value.line, exc.value.column) == (line, column)
    assert text[exc.value.position] in '"{'
    assert f"строка {line}" in str(exc.value)


@pytest.mark.parametrize(
    "ds, constraint",
    [
        (DefiningSystem(p=(1,), q=(1,), S=((),), T=((),)), "DS1"),
        (DefiningSystem(p=(3,), q=(1,), S=((2,),), T=((3,),)), "DS2"),
        (DefiningSystem(p=(3,), q=(1,), S=((5,),), T=((),)), "DS3"),
        (DefiningSystem(p=(2,), q=(1,), S=((3,),), T=((3,),)), "DS4"),
        (DefiningSystem(p=(6, 3), q=(2, 2), S=((2, 3), ()), T=((), ())), "DS5"),
        (DefiningSystem(p=(1, 2), q=(1, 1), S=((2,), ()), T=((2,), ())), "DS6"),
    ],
)
def test_each_constraint_is_reported(ds, constraint):
    report = validate(ds)
    assert not report.ok
    assert constraint in report.constraint_ids()


def test_invalid_system_error_carries_report():
    bad = '{"p":[6,3],"q":[2,2],"S":[[2,3],[]],"T":[[],[]]}'
    with pytest.raises(InvalidSystemError) as exc:
        parse(bad)
    assert exc.value.report.constraint_ids() == ["DS5"]
    assert "DS5" in str(exc.value)


def test_e1_is_valid_and_not_fundamental():
    assert validate(E1).ok
    assert not is_fundamental(E1)
    assert is_fundamental(DefiningSystem(p=(2, 1), q=(1, 1), S=((), ()), T=((), ())))


@pytest.mark.parametrize("bounds", [(0, 1, 1, 0), (1, 0, 1, 0), (1, 1, 0, 0), (1, 1, 1, -1)])
def test_bad_enumeration_bounds(bounds):
    with pytest.raises(PreconditionError):
        EnumerationBounds(*bounds)


def test_enumeration_yields_only_valid_systems_without_duplicates():
    assert QUICK_SWEEP
    assert all(validate(ds).ok for ds in QUICK_SWEEP)
    assert len(set(QUICK_SWEEP)) == len(QUICK_SWEEP)


def test_enumeration_order_is_lexicographic():
    keys = [(ds.n, ds.p, ds.q, ds.S, ds.T) for ds in QUICK_SWEEP]
    assert keys == sorted(keys)


def test_enumeration_of_single_branch():
    systems = list(enumerate_systems(EnumerationBounds(max_n=1, max_p=2, max_q=1, max_t=0)))
    # p=2: S ⊆ {2}; p=1 отброшено по DS1
    assert [serialize(ds) for ds in systems] == [
        '{"p":[2],"q":[1],"S":[[]],"T":[[]]}',
        '{"p":[2],"q":[1],"S":[[2]],"T":[[]]}',
    ]


def test_enumeration_respects_p_equal_one_rule():
    systems = enumerate_systems(EnumerationBounds(max_n=2, max_p=2, max_q=1, max_t=1))
    for ds in systems:
        for i in ds.branches():
            if ds.p_at(i) == 1:
                assert ds.T_at(i) == ()


@given(st.sampled_from(QUICK_SWEEP))
def test_serialized_form_parses_back(ds):
    assert parse(serialize(ds)) == ds
