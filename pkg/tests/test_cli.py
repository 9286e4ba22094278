import json

import pytest

from cli.app import dispatch
from cli.commands import EXIT_GUARD, EXIT_OK, EXIT_USAGE
from cli.output import VERSION


def run_json(capsys, *argv):
    code = dispatch(list(argv) + ["--json"])
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def test_baer_both(capsys):
    code, env = run_json(capsys, "baer", "--r", "2", "--s", "2", "--c", "2", "--method", "both")
    assert code == EXIT_OK
    assert env["subcommand"] == "baer"
    assert env["version"] == VERSION
    assert env["input"] == {"r": 2, "s": 2, "c": 2, "method": "both"}
    assert env["result"] == {"d": 2, "n": 2, "invariants": [2, 2], "agree": True}


def test_baer_formula_and_rows(capsys):
    _, env = run_json(capsys, "baer", "--r", "4", "--s", "6", "--c", "1", "--method", "formula")
    assert env["result"] == {"d": 2, "n": 1, "invariants": [2]}
    _, env = run_json(capsys, "baer", "--r", "4", "--s", "6", "--c", "1", "--method", "engine",
                      "--show-rows")
    assert len(env["result"]["rows"]) == 4
    assert "agree" not in env["result"]


def test_global_flags_before_subcommand(capsys):
    code = dispatch(["--json", "--seed", "5", "hall", "--letters", "2", "--weight", "3", "--count-only"])
    env = json.loads(capsys.readouterr().out)
    assert code == EXIT_OK
    assert env["result"]["table"] == [{"weight": 1, "count": 2}, {"weight": 2, "count": 1},
                                      {"weight": 3, "count": 2}]
    assert env["result"]["total"] == 5
    assert "items" not in env["result"]


def test_hall_items(capsys):
    _, env = run_json(capsys, "hall", "--letters", "2", "--weight", "3")
    assert env["result"]["items"] == ["x1", "x2", "[x2,x1]", "[[x2,x1],x1]", "[[x2,x1],x2]"]
    assert env["result"]["total"] == 5


def test_nf(capsys):
    _, env = run_json(capsys, "nf", "--letters", "2", "--class", "2", "--expr", "x2 x1")
    assert env["result"] == {"exponents": [1, 1, 1], "normal_form": "x1 x2 [x2,x1]", "weight": 1}
    _, env = run_json(capsys, "nf", "--letters", "2", "--class", "2", "--expr", "[x2^2, x1]")
    assert env["result"]["normal_form"] == "[x2,x1]^2"
    _, env = run_json(capsys, "nf", "--letters", "2", "--class", "3", "--expr", "x1 x1^-1")
    assert env["result"] == {"exponents": [0, 0, 0, 0, 0], "normal_form": "1", "weight": None}


def test_nf_rejects_bad_words(capsys):
    assert dispatch(["nf", "--letters", "2", "--class", "2", "--expr", "x3"]) == EXIT_USAGE
    assert dispatch(["nf", "--letters", "2", "--class", "2", "--expr", "[x1]"]) == EXIT_USAGE
    assert dispatch(["nf", "--letters", "2", "--class", "2", "--expr", "x1 ? x2"]) == EXIT_USAGE
    assert capsys.readouterr().out == ""


def test_cover_verdict(capsys):
    code, env = run_json(capsys, "cover", "verdict", "--r", "4", "--s", "6", "--c", "2")
    assert code == EXIT_OK
    assert env["subcommand"] == "cover verdict"
    assert env["result"]["verdict"] == "NoneExists"
    assert len(env["result"]["trace"]) == 7


def test_cover_construct(capsys):
    code, env = run_json(capsys, "cover", "construct", "--r", "2", "--s", "2")
    assert code == EXIT_OK
    result = env["result"]
    assert (result["order"], result["center"], result["subgroup_order"], result["pass"]) == (8, 2, 2, True)
    assert result["gamma2_invariants"] == [2]


def test_cover_search_positive_control(capsys, tmp_path):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"golden_file": str(tmp_path / "goldens.json")}))
    argv = ["--config", str(config), "cover", "search", "--r", "2", "--s", "2", "--c", "1",
            "--workers", "1"]

    code, env = run_json(capsys, *argv)
    assert code == EXIT_OK
    result = env["result"]
    assert (result["examined"], result["consistent"], result["passing"]) == (8, 8, 4)
    assert result["order"] == 8
    assert result["verdict"] == "ExistsConstructed"
    assert result["agrees"] is True
    assert result["golden"] == "absent"

    _, env = run_json(capsys, *argv, "--record-golden")
    assert env["result"]["golden"] == "recorded"
    stored = json.loads((tmp_path / "goldens.json").read_text())
    assert stored == {"2-2-1-2": {"examined": 8, "consistent": 8, "passing": 4}}

    _, env = run_json(capsys, *argv)
    assert env["result"]["golden"] == "match"

    (tmp_path / "goldens.json").write_text(json.dumps(
        {"2-2-1-2": {"examined": 8, "consistent": 7, "passing": 4}}))
    code, env = run_json(capsys, *argv)
    assert code == EXIT_OK
    assert env["result"]["golden"] == "mismatch"


def test_cover_search_nonexistence(capsys, tmp_path):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"golden_file": str(tmp_path / "goldens.json")}))
    code, env = run_json(capsys, "--config", str(config), "cover", "search", "--r", "2", "--s", "2",
                         "--c", "2", "--workers", "1")
    assert code == EXIT_OK
    assert env["result"]["examined"] == 512
    assert env["result"]["passing"] == 0
    assert env["result"]["verdict"] == "NoneExists"


def test_pcp_file(capsys, tmp_path):
    path = tmp_path / "q8.pcp"
    path.write_text("p = 2\nm = 3\ng1^2 = g3\ng2^2 = g3\n[g2,g1] = g3\n")
    code, env = run_json(capsys, "pcp", "--file", str(path), "--materialize")
    assert code == EXIT_OK
    assert env["result"]["consistent"] is True
    assert env["result"]["order"] == 8
    assert env["result"]["group"]["involutions"] == 1

    bad = tmp_path / "bad.pcp"
    bad.write_text("p = 2\nm = 3\ng1^2 = g2\n[g2,g1] = g3\n")
    code, env = run_json(capsys, "pcp", "--file", str(bad), "--check")
    assert code == EXIT_OK
    assert env["result"]["consistent"] is False
    assert dispatch(["pcp", "--file", str(bad), "--materialize"]) == EXIT_USAGE


def test_pcp_missing_file(tmp_path):
    assert dispatch(["pcp", "--file", str(tmp_path / "none.pcp"), "--check"]) == EXIT_USAGE


def test_check_suite(capsys):
    code, env = run_json(capsys, "--seed", "3", "check", "--suite", "hall-witt", "--trials", "40")
    assert code == EXIT_OK
    assert env["input"]["seed"] == 3
    assert env["result"]["failures"] == 0


def test_sweep(capsys):
    code, env = run_json(capsys, "sweep", "--r-max", "3", "--s-max", "3", "--c-max", "2",
                         "--workers", "1")
    assert code == EXIT_OK
    assert env["result"] == {"count": 18, "agree": True, "failures": []}


@pytest.mark.parametrize("argv", [
    [],
    ["frobnicate"],
    ["baer", "--r", "2"],
    ["baer", "--r", "two", "--s", "2", "--c", "1"],
    ["baer", "--r", "2", "--s", "2", "--c", "1", "--method", "guess"],
    ["cover"],
    ["pcp", "--file", "x.pcp"],
    ["baer", "--r", "0", "--s", "2", "--c", "1"],
    ["check", "--suite", "axioms", "--trials", "0"],
])
def test_usage_errors(argv, capsys):
    assert dispatch(argv) == EXIT_USAGE
    assert capsys.readouterr().out == ""


@pytest.mark.parametrize("argv", [
    ["cover", "construct", "--r", "12", "--s", "12"],
    ["--max-order", "16", "cover", "search", "--r", "2", "--s", "2", "--c", "3", "--workers", "1"],
    ["baer", "--r", "2", "--s", "2", "--c", "7"],
    ["--max-basis", "4", "hall", "--letters", "2", "--weight", "4"],
])
def test_resource_guards(argv):
    assert dispatch(argv) == EXIT_GUARD


def test_help_exits_cleanly(capsys):
    assert dispatch(["--help"]) == EXIT_OK
    assert "usage" in capsys.readouterr().out


def test_text_output(capsys):
    assert dispatch(["baer", "--r", "2", "--s", "2", "--c", "2"]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.startswith("baer (")
    assert "invariants: 2, 2" in out
    assert "agree: true" in out


def test_text_output_lists_one_string_per_line(capsys):
    assert dispatch(["hall", "--letters", "2", "--weight", "3"]) == EXIT_OK
    lines = [line.strip() for line in capsys.readouterr().out.splitlines()]
    items = [line[2:] for line in lines[lines.index("items:") + 1:]]
    assert items == ["x1", "x2", "[x2,x1]", "[[x2,x1],x1]", "[[x2,x1],x2]"]

    assert dispatch(["cover", "verdict", "--r", "4", "--s", "6", "--c", "2"]) == EXIT_OK
    lines = [line.strip() for line in capsys.readouterr().out.splitlines()]
    start = lines.index("trace:") + 1
    assert all(line.startswith("- ") for line in lines[start:start + 7])


def test_json_is_deterministic(capsys):
    argv = ["cover", "verdict", "--r", "4", "--s", "6", "--c", "1"]
    _, first = run_json(capsys, *argv)
    _, second = run_json(capsys, *argv)
    first.pop("elapsed_ms")
    second.pop("elapsed_ms")
    assert json.dumps(first, sort_keys=True) == json.dumps(second, sort_keys=True)


def test_hall_locate(capsys):
    _, env = run_json(capsys, "hall", "--letters", "2", "--weight", "3", "--count-only",
                      "--locate", "[[x2,x1],x2]")
    assert env["result"]["located"] == {"bracket": "[[x2,x1],x2]", "index": 5, "weight": 3}
    assert dispatch(["hall", "--letters", "2", "--weight", "3", "--locate", "[x1,x2]"]) == EXIT_USAGE
    assert dispatch(["hall", "--letters", "2", "--weight", "2", "--locate", "[[x2,x1],x1]"]) == EXIT_USAGE


def test_check_all_suites(capsys):
    code, env = run_json(capsys, "check", "--suite", "all", "--class", "2", "--trials", "20")
    assert code == EXIT_OK
    assert [row["suite"] for row in env["result"]["suites"]] == ["axioms", "hall-witt", "power",
                                                                 "truncation"]
    assert env["result"]["failures"] == 0


def test_max_order_flag_overrides_config(capsys, tmp_path):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"max_order": 4}))
    assert dispatch(["--config", str(config), "cover", "construct", "--r", "2", "--s", "2"]) == EXIT_GUARD
    assert dispatch(["--config", str(config), "--max-order", "8", "cover", "construct",
                     "--r", "2", "--s", "2"]) == EXIT_OK
