import json
import subprocess
import sys

import pytest

from quasimart.cli import main
from quasimart.errors import SpaceError
from quasimart.fixtures import fixtures
from quasimart.rational import format_rational, parse_rational
from quasimart.scenario import (
    Scenario,
    ScenarioError,
    digest,
    dump_scenario,
    load_scenario,
    parse_scenario,
    save_scenario,
    scenario_text,
)

E3 = {
    "outcomes": ["a", "b"],
    "prob": ["1/2", "1/2"],
    "indices": ["1", "2", "3"],
    "filtration": [[["a", "b"]], [["a"], ["b"]], [["a"], ["b"]]],
    "processes": {"X": [["0", "0"], ["1", "-1"], ["0", "0"]]},
    "subfiltrations": {"G": [[["a", "b"]], [["a", "b"]], [["a", "b"]]]},
}
E2 = {
    "outcomes": ["a", "b"],
    "prob": ["1/2", "1/2"],
    "indices": ["1", "2"],
    "filtration": [[["a", "b"]], [["a"], ["b"]]],
    "processes": {"X": [["1", "1"], ["1", "0"]]},
}


def write(tmp_path, data, name="s.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data) if not isinstance(data, str) else data)
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip().startswith("{") else out), err


class TestRational:
    @pytest.mark.parametrize("text, value", [("3", 3), ("-2/4", -0.5), ("0/5", 0)])
    def test_parse(self, text, value):
        assert parse_rational(text) == value

    def test_zero_denominator(self):
        with pytest.raises(ValueError, match="zero denominator"):
            parse_rational("1/0")

    @pytest.mark.parametrize("text", ["1.5", "a", "", "1/-2", " 1"])
    def test_malformed(self, text):
        with pytest.raises(ValueError):
            parse_rational(text)

    def test_format(self):
        assert format_rational(parse_rational("6/4")) == "3/2"
        assert format_rational(parse_rational("4/2")) == "2"


class TestScenario:
    def test_load(self, tmp_path):
        sc = load_scenario(write(tmp_path, E3))
        assert list(sc.processes) == ["X"]
        assert sc.processes["X"] == fixtures()["E3"]

    def test_zero_denominator(self, tmp_path):
        with pytest.raises(ScenarioError, match=r"prob\[0\]: zero denominator"):
            load_scenario(write(tmp_path, {**E3, "prob": ["1/0", "1/2"]}))

    def test_non_refining(self, tmp_path):
        bad = {**E3, "filtration": [[["a"], ["b"]], [["a", "b"]], [["a"], ["b"]]]}
        with pytest.raises(SpaceError, match="index 2 does not refine index 1"):
            load_scenario(write(tmp_path, bad))

    def test_json_position(self, tmp_path):
        with pytest.raises(ScenarioError, match="line 2 column"):
            load_scenario(write(tmp_path, '{\n  "outcomes": [,]\n}'))

    def test_field_types(self):
        with pytest.raises(ScenarioError, match=r"processes.X\[1\]"):
            parse_scenario({**E3, "processes": {"X": [["0", "0"], "oops", ["0", "0"]]}})

    def test_subfiltration_must_coarsen(self):
        bad = {**E3, "subfiltrations": {"G": [[["a"], ["b"]]] * 3}}
        with pytest.raises(SpaceError, match="not coarser"):
            parse_scenario(bad)

    def test_unknown_names(self):
        sc = parse_scenario(E3)
        with pytest.raises(ScenarioError, match="unknown process 'Y'"):
            sc.process("Y")
        with pytest.raises(ScenarioError, match="unknown subfiltration"):
            sc.subfiltration("H")

    def test_round_trip_and_digest(self, tmp_path):
        sc = parse_scenario(E3)
        path = tmp_path / "out.json"
        save_scenario(sc, path)
        again = load_scenario(path)
        assert again == sc
        assert digest(again) == digest(sc)
        assert path.read_text() == scenario_text(sc)

    def test_canonical_form(self):
        shuffled = {**E3, "filtration": [[["b", "a"]], [["b"], ["a"]], [["a"], ["b"]]]}
        assert dump_scenario(parse_scenario(shuffled)) == dump_scenario(parse_scenario(E3))


class TestCommands:
    def test_validate(self, tmp_path, capsys):
        code, rep, _ = run(capsys, "validate", "--scenario", write(tmp_path, E3))
        assert code == 0
        assert rep["result"]["violations"] == []
        assert rep["ok"] and rep["input_digest"]

    def test_validate_reports_violations(self, tmp_path, capsys):
        bad = {**E3, "prob": ["1/2", "1/3"]}
        code, rep, _ = run(capsys, "validate", "--scenario", write(tmp_path, bad))
        assert code == 1
        assert rep["result"]["violations"] == ["probabilities sum to 5/6 ≠ 1"]

    def test_norm_brute_force(self, tmp_path, capsys):
        path = write(tmp_path, E3)
        code, rep, _ = run(capsys, "norm", "--scenario", path, "--process", "X", "--brute-force")
        assert code == 0
        assert rep["result"]["value"] == "1"
        assert rep["result"]["argmax"] == ["1", "2", "3"]
        assert rep["checks"] == {"fast_path_matches_brute_force": True, "isometry": True}

    def test_rao_on_supermartingale(self, tmp_path, capsys):
        code, rep, _ = run(capsys, "rao", "--scenario", write(tmp_path, E2), "--process", "X")
        assert code == 0
        assert rep["result"]["neg_part_is_zero"] is True
        assert rep["result"]["norm_certificate"] == "1/2 = 1/2 + 0"

    def test_variation(self, tmp_path, capsys):
        path = write(tmp_path, E3)
        code, rep, _ = run(capsys, "variation", "--scenario", path, "--process", "X", "--cut", "2,3")
        assert code == 0
        assert rep["result"]["variation"] == ["1", "1"]
        assert rep["result"]["conditional_variation"] == ["1", "1"]

    def test_measure_and_jordan(self, tmp_path, capsys):
        path = write(tmp_path, E3)
        code, rep, _ = run(capsys, "measure", "--scenario", path, "--process", "X")
        assert code == 0 and rep["result"]["total_variation"] == "1"
        assert [a["value"] for a in rep["result"]["atoms"]] == ["0", "1/2", "-1/2"]
        code, rep, _ = run(capsys, "jordan", "--scenario", path, "--process", "X")
        assert code == 0 and rep["ok"]

    def test_riesz(self, tmp_path, capsys):
        code, rep, _ = run(capsys, "riesz", "--scenario", write(tmp_path, E2), "--process", "X")
        assert code == 0
        assert rep["result"]["martingale"]["slices"] == [["1/2", "1/2"], ["1", "0"]]

    def test_doob_meyer_routes_through_riesz(self, tmp_path, capsys):
        code, rep, _ = run(capsys, "doob-meyer", "--scenario", write(tmp_path, E2), "--process", "X")
        assert code == 0
        assert rep["result"]["potential"]["slices"] == [["1/2", "1/2"], ["0", "0"]]
        assert rep["result"]["compensator"]["slices"] == [["0", "0"], ["1/2", "1/2"]]

    def test_doob_meyer_names_predicate(self, tmp_path, capsys):
        code, _, err = run(capsys, "doob-meyer", "--scenario", write(tmp_path, E3), "--process", "X")
        assert code == 1
        assert "not positive" in err

    def test_project(self, tmp_path, capsys):
        path = write(tmp_path, E3)
        args = ("project", "--scenario", path, "--process", "X", "--subfiltration", "G")
        code, rep, _ = run(capsys, *args)
        assert code == 0
        assert rep["result"]["q_norm_after"] == "0"
        assert rep["checks"]["adapted_to_subfiltration"]

    def test_usage_errors(self, tmp_path, capsys):
        path = write(tmp_path, E3)
        assert run(capsys, "norm", "--scenario", path)[0] == 2
        assert run(capsys, "norm", "--scenario", path, "--process", "nope")[0] == 2
        assert run(capsys, "variation", "--scenario", path, "--process", "X", "--cut", "3,1")[0] == 2
        bad = write(tmp_path, {**E3, "prob": ["1/0", "1/2"]}, "bad.json")
        code, _, err = run(capsys, "norm", "--scenario", bad, "--process", "X")
        assert code == 2 and "zero denominator" in err

    def test_check(self, capsys):
        code, rep, _ = run(capsys, "check", "--seed", "1", "--trials", "3", "--fixtures")
        assert code == 0
        assert rep["result"]["ok"] and rep["result"]["failures"] == 0
        assert rep["input_digest"] is None

    def test_gen_round_trip(self, tmp_path, capsys):
        out = tmp_path / "gen.json"
        assert main(["gen", "--seed", "5", "--outcomes", "5", "--indices", "4", "--out", str(out)]) == 0
        sc = load_scenario(out)
        assert isinstance(sc, Scenario) and sc.space.size == 5 and sc.space.horizon == 4
        assert set(sc.processes) >= {"martingale", "potential", "quasimartingale"}
        assert out.read_text() == scenario_text(sc)
        main(["gen", "--seed", "5", "--outcomes", "5", "--indices", "4"])
        assert capsys.readouterr().out == out.read_text()

    def test_out_file_matches_stdout(self, tmp_path, capsys):
        path = write(tmp_path, E3)
        out = tmp_path / "report.json"
        main(["measure", "--scenario", path, "--process", "X", "--out", str(out)])
        main(["measure", "--scenario", path, "--process", "X"])
        assert capsys.readouterr().out == out.read_text()
        assert out.read_text().endswith("}\n")


def test_module_entry_point(tmp_path):
    path = write(tmp_path, E3)
    cmd = [sys.executable, "-m", "quasimart", "validate", "--scenario", path]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == second
    assert json.loads(first)["command"] == "validate"
