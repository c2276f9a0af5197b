import json

import pytest

from heyting_completion.app.cli import (
    EXIT_FAILURE,
    EXIT_INPUT,
    EXIT_PASS,
    EXIT_RESOURCE,
    build_parser,
    main,
    settings_from_args,
)
from heyting_completion.app.commands import cmd_analyze, cmd_check, cmd_complete, cmd_suite
from heyting_completion.app.suite import negative_controls
from heyting_completion.config import Settings
from heyting_completion.utils.formats import load_algebra


def _json(capsys):
    return json.loads(capsys.readouterr().out)


def test_parser_requires_a_command():
    with pytest.raises(SystemExit):
        build_parser().parse_args([])


def test_analyze_l5(fixture_dir, capsys):
    assert main(["analyze", str(fixture_dir / "L5.json"), "--json"]) == EXIT_PASS
    report = _json(capsys)
    facts = report["facts"]
    assert facts["size"] == 5
    assert facts["Y"] == ["↑a", "↑b"]
    assert facts["centrally_supplemented"] is False
    assert facts["dual_stone_witness"] == {"x": "a", "y": "b", "lhs": "0", "rhs": "m"}
    assert [q["elements"] for q in facts["quotients"]] == [["0", "m", "1"], ["0", "m", "1"]]


def test_analyze_text_output(fixture_dir, capsys):
    assert main(["analyze", str(fixture_dir / "C3.json")]) == EXIT_PASS
    out = capsys.readouterr().out
    assert out.startswith("analyze: PASS")
    assert "centrally_supplemented: True" in out


def test_bd2_fails_on_c4(fixture_dir, capsys):
    code = main(["check", str(fixture_dir / "C4.json"), "--eq", "1 = x2 v (x2 -> (x1 v x1*))", "--json"])
    assert code == EXIT_FAILURE
    check = _json(capsys)["checks"][0]
    assert check["holds"] is False
    assert check["witness"] == {"x1": "p", "x2": "q"}


def test_bd2_holds_on_l5(fixture_dir):
    report = cmd_check("1 = x2 v (x2 -> (x1 v x1*))", fixture_dir / "L5.json")
    assert report.passed
    assert report.facts["closure_failures"] == []


def test_bad_equation_is_an_input_error(fixture_dir, capsys):
    assert main(["check", str(fixture_dir / "C3.json"), "--eq", "x # y = 1", "--json"]) == EXIT_INPUT
    error = _json(capsys)["error"]
    assert error["error"] == "ParseError"
    assert error["witness"] == {"position": 2}


def test_missing_file_is_an_input_error(tmp_path, capsys):
    assert main(["analyze", str(tmp_path / "absent.json")]) == EXIT_INPUT
    assert "error:" in capsys.readouterr().err


def test_non_distributive_input(tmp_path):
    path = tmp_path / "m3.json"
    leq = [[0, 1], [0, 2], [0, 3], [1, 4], [2, 4], [3, 4]]
    path.write_text(json.dumps({"kind": "lattice", "size": 5, "leq": leq}), encoding="utf-8")
    assert main(["analyze", str(path)]) == EXIT_INPUT


def test_carrier_limit_exit_code(fixture_dir):
    assert main(["complete", str(fixture_dir / "L5.json"), "--max-carrier", "6"]) == EXIT_RESOURCE


def test_gen_then_check_directory(tmp_path, capsys):
    out = tmp_path / "corpus"
    assert main(["gen", "--max-points", "2", "--out", str(out), "--json"]) == EXIT_PASS
    assert _json(capsys)["facts"]["entries"] == 3
    assert (out / "index.json").exists()
    # P2-000 and P2-001 are the three-element chain and B4, in some order
    assert main(["check", str(out), "--eq", "x v x* = 1", "--json"]) == EXIT_FAILURE
    report = _json(capsys)
    assert report["facts"]["satisfied"] == 2
    assert [c["subject"] for c in report["checks"]] == ["P1-000", "P2-000", "P2-001"]


def test_check_directory_of_lattice_files(fixture_dir):
    report = cmd_check("(x -> y) v (y -> x) = 1", fixture_dir)
    subjects = {c.subject: c.holds for c in report.checks}
    assert subjects["C4"] and subjects["L5"]
    assert not subjects["B4+1"]


def test_complete_l5_writes_outputs(fixture_dir, tmp_path):
    report = cmd_complete(fixture_dir / "L5.json", tmp_path, dump_relation=True)
    assert report.passed
    assert report.facts["S_size"] == 9
    assert report.facts["plus_size"] == 9
    assert report.facts["plus_isomorphic_to_input"] is False
    for suffix in ("S.json", "S.dot", "plus.json", "plus.dot", "sections.json", "N.json"):
        assert (tmp_path / f"L5.{suffix}").exists(), suffix
    relation = json.loads((tmp_path / "L5.N.json").read_text(encoding="utf-8"))
    assert len(relation["points"]) == 25
    assert load_algebra(tmp_path / "L5.S.json").size == 9
    sections = json.loads((tmp_path / "L5.sections.json").read_text(encoding="utf-8"))
    assert sections["points"] == ["↑a", "↑b"]
    assert len(sections["sections"]) == 9


def test_complete_fixes_centrally_supplemented_input(fixture_dir):
    report = cmd_complete(fixture_dir / "2x3.json")
    assert report.facts["plus_isomorphic_to_input"] is True


def test_analyze_poset_file(fixture_dir):
    report = cmd_analyze(fixture_dir / "V.json")
    assert report.facts["size"] == 5
    assert report.facts["fsi"] is True


def test_negative_controls_are_caught():
    report = negative_controls()
    assert len(report.checks) == 3
    assert report.passed


def test_suite_random_flags():
    args = build_parser().parse_args(["suite", "--random", "3", "--random-points", "5", "--seed", "9"])
    settings = settings_from_args(args)
    assert (settings.random_count, settings.random_points, settings.seed) == (3, 5, 9)


@pytest.mark.slow
def test_suite_on_the_smallest_corpus(capsys):
    assert main(["suite", "--max-points", "1", "--json"]) == EXIT_PASS
    report = _json(capsys)
    assert report["facts"]["failures"] == 0
    # one poset, eight fixtures, two random posets on two points
    assert report["facts"]["entries"] == 11
    assert report["facts"]["random"] == {"seed": 0, "points": 2, "entries": ["R0-0", "R0-1"]}


@pytest.mark.slow
def test_suite_on_posets_up_to_four_points():
    report = cmd_suite(4, Settings(random_count=0))
    assert report.facts["entries"] == 24 + 8
    assert report.passed, [(c.subject, c.name, c.witness) for c in report.failures][:5]
