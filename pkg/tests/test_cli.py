import json

import pytest

from main import build_parser, run
from tests.conftest import E1, SMALL_FUNDAMENTAL


def test_census_text(write_system, capsys):
    assert run(["census", write_system(E1)]) == 0
    out = capsys.readouterr().out
    assert "Ã_{9,4}" in out
    assert "Семейств корядовых труб: 3" in out


def test_census_of_fundamental_system_is_reported_not_failed(write_system, capsys):
    assert run(["census", write_system(SMALL_FUNDAMENTAL), "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["precondition_unmet"].startswith("fundamental/hereditary")


def test_validate_reports_constraint(write_system, capsys):
    path = write_system({"p": [6, 3], "q": [2, 2], "S": [[2, 3], []], "T": [[], []]})
    assert run(["validate", path]) == 1
    assert "DS5" in capsys.readouterr().out


def test_validate_json(write_system, capsys):
    assert run(["validate", write_system(E1), "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["ok"] is True
    assert data["violations"] == []


def test_broken_json_is_an_error(write_system, capsys):
    assert run(["quiver", write_system('{"p": [6,')]) == 1
    assert capsys.readouterr().out.startswith("❌")


@pytest.mark.parametrize("argv", [[], ["census"], ["bogus", "x.json"], ["extend", "x.json"]])
def test_usage_errors(argv):
    assert run(argv) == 2


def test_bad_index_argument(write_system):
    assert run(["extend", write_system(E1), "--index", "q:1:1"]) == 2


def test_missing_file(tmp_path):
    assert run(["census", str(tmp_path / "nope.json")]) == 2


def test_quiver_dot(write_system, capsys):
    assert run(["quiver", write_system(E1), "--format", "dot"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("digraph Q {")
    assert out.count("->") == 22


def test_extend_json(write_system, capsys):
    assert run(["extend", write_system(E1), "--index", "z:1:8", "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["system"]["T"] == [[4, 6, 8], []]
    assert data["new_index"] == "x_1_8"
    assert data["consistent"] is True
    assert data["diff"] == []


def test_extend_by_inadmissible_index(write_system, capsys):
    assert run(["extend", write_system(E1), "--index", "x:1:3", "--json"]) == 1
    data = json.loads(capsys.readouterr().out)
    assert data["error"] == "PreconditionError"
    assert "Im 𝔓𝔖" in data["message"]


def test_admissible_json(write_system, capsys):
    assert run(["admissible", write_system(E1), "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["admissible"] == ["z_1_8", "z_2_2"]
    assert data["consistent"] is True


def test_structure_with_paths(write_system, capsys):
    assert run(["structure", write_system(E1), "--json", "--paths"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert len(data["I"]) == 16
    assert all(v["status"] == "pass" for v in data["axioms"].values())
    assert data["paths"]["x_1_7"]["omega"] == "α_{1,8}"


def test_ancestry_json(write_system, capsys):
    assert run(["ancestry", write_system(E1), "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert len(data["chain"]) == 7
    assert data["fundamental"]["S"] == [[], []]


def test_verify_selected_lemma(write_system, capsys):
    assert run(["verify", write_system(E1), "--lemmas", "tau", "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["ok"] is True
    assert list(data["counts"]) == ["tau"]


def test_verify_unknown_lemma_is_usage_error(write_system):
    assert run(["verify", write_system(E1), "--lemmas", "nope"]) == 2


def test_enumerate_list(capsys):
    argv = ["enumerate", "--max-n", "1", "--max-p", "2", "--max-q", "1", "--max-t", "0", "--json"]
    assert run(argv) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["count"] == 2


@pytest.mark.parametrize(
    "flag, value",
    [("--max-n", "0"), ("--max-p", "0"), ("--max-q", "0"), ("--max-t", "-1"),
     ("--max-n", "two"), ("--workers", "0")],
)
def test_enumerate_bad_bounds_are_usage_errors(flag, value, capsys):
    bounds = {"--max-n": "1", "--max-p": "2", "--max-q": "1", "--max-t": "0"}
    bounds[flag] = value
    argv = ["enumerate", *(item for pair in bounds.items() for item in pair)]
    assert run(argv) == 2
    assert flag in capsys.readouterr().err


def test_check_all_is_deterministic(capsys):
    argv = ["enumerate", "--max-n", "1", "--max-p", "2", "--max-q", "1", "--max-t", "1",
            "--check-all", "--json"]
    assert run(argv) == 0
    first = capsys.readouterr().out
    assert run(argv) == 0
    assert capsys.readouterr().out == first
    data = json.loads(first)
    assert data["ok"] is True
    assert data["failures"] == []


def test_parser_defaults():
    args = build_parser().parse_args(["verify", "e1.json"])
    assert args.lemmas is None
    assert args.budget is None
    assert not args.json
