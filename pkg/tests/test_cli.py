"""CLI tests: protocol output, exit codes, subcommand plumbing."""

import json

import pytest

from xcspkit.cli import main
from xcspkit.generators import gen_dubois, gen_knapsack, gen_langford
from xcspkit.harness import RunRecord, write_records_csv
from xcspkit.io import parse_instance, parse_solution, write_instance, write_solution
from xcspkit.model import Assignment

KNAPSACK_DATA = {
    "capacity": 10,
    "items": [
        {"weight": 2, "value": 54},
        {"weight": 2, "value": 92},
        {"weight": 1, "value": 62},
        {"weight": 2, "value": 20},
        {"weight": 2, "value": 55},
    ],
}


def _protocol_lines(output):
    return [line for line in output.splitlines() if line]


class TestSolveCommand:
    def test_dubois_unsat_exit_20(self, tmp_path, capsys):
        path = tmp_path / "dubois3.xml"
        path.write_text(write_instance(gen_dubois(3)))
        code = main(["solve", str(path), "--timeout", "60"])
        out = capsys.readouterr().out
        assert code == 20
        assert "s UNSATISFIABLE" in out

    def test_langford_sat_protocol_order(self, tmp_path, capsys):
        path = tmp_path / "langford3.xml"
        path.write_text(write_instance(gen_langford(3)))
        code = main(["solve", str(path), "--timeout", "60"])
        out = capsys.readouterr().out
        assert code == 10
        lines = _protocol_lines(out)
        s_lines = [i for i, line in enumerate(lines) if line.startswith("s ")]
        v_lines = [i for i, line in enumerate(lines) if line.startswith("v ")]
        assert len(s_lines) == 1
        assert lines[s_lines[0]] == "s SATISFIABLE"
        assert len(v_lines) == 1 and v_lines[0] > s_lines[0]
        assert all(line[:2] in ("c ", "s ", "v ", "o ") for line in lines)
        # the printed witness verifies
        payload = lines[v_lines[0]][2:]
        assignment = parse_solution(payload)
        inst = parse_instance(path.read_text())
        from xcspkit.harness import verify

        assert verify(inst, assignment).ok

    def test_optimum_protocol_and_exit_30(self, tmp_path, capsys):
        data = tmp_path / "k.json"
        data.write_text(json.dumps(KNAPSACK_DATA))
        out_xml = tmp_path / "out.xml"
        assert main(["generate", "knapsack", "--data", str(data), "-o", str(out_xml)]) == 0
        code = main(["solve", str(out_xml), "--timeout", "60"])
        out = capsys.readouterr().out
        assert code == 30
        lines = _protocol_lines(out)
        o_values = [int(line[2:]) for line in lines if line.startswith("o ")]
        assert o_values and o_values[-1] == 283
        assert o_values == sorted(o_values)  # maximization: nondecreasing quality
        assert "s OPTIMUM FOUND" in lines
        assert any(line.startswith("v ") for line in lines)

    def test_enumerate_all_flag(self, tmp_path, capsys):
        path = tmp_path / "langford3.xml"
        path.write_text(write_instance(gen_langford(3)))
        code = main(["solve", str(path), "--all", "--timeout", "60"])
        out = capsys.readouterr().out
        assert code == 10
        assert "s SATISFIABLE" in out

    def test_missing_file_exit_2(self, capsys):
        assert main(["solve", "/nonexistent/file.xml"]) == 2
        assert "error" in capsys.readouterr().err

    def test_unknown_exit_code_zero_on_timeout(self, tmp_path, capsys):
        from xcspkit.generators import gen_dubois as _dubois

        path = tmp_path / "dubois20.xml"
        path.write_text(write_instance(_dubois(20)))
        code = main(["solve", str(path), "--timeout", "0.3"])
        out = capsys.readouterr().out
        assert code == 0
        assert "s UNKNOWN" in out

    def test_quiet_log_level_suppresses_comments(self, tmp_path, capsys, monkeypatch):
        path = tmp_path / "dubois3.xml"
        path.write_text(write_instance(gen_dubois(3)))
        monkeypatch.setenv("XCSP_MINI_LOG", "quiet")
        main(["solve", str(path)])
        quiet_out = capsys.readouterr().out
        assert not any(line.startswith("c ") for line in quiet_out.splitlines())
        monkeypatch.setenv("XCSP_MINI_LOG", "debug")
        main(["solve", str(path)])
        debug_out = capsys.readouterr().out
        assert any(line.startswith("c ") for line in debug_out.splitlines())


class TestGenerateCommand:
    def test_param_form(self, capsys):
        assert main(["generate", "dubois", "--param", "n=3"]) == 0
        out = capsys.readouterr().out
        inst = parse_instance(out)
        assert len(inst.variables) == 9

    def test_unknown_problem_exit_2(self, capsys):
        assert main(["generate", "nonsense", "--param", "n=3"]) == 2

    def test_no_tags_flag(self, capsys):
        assert main(["generate", "magic-hexagon", "--param", "n=3", "--param", "s=1"]) == 0
        full = parse_instance(capsys.readouterr().out)
        assert main(["generate", "magic-hexagon", "--param", "n=3", "--param", "s=1", "--no-tags", "sym"]) == 0
        bare = parse_instance(capsys.readouterr().out)
        assert len(full.constraints) - len(bare.constraints) == 6

    def test_nodv_flag(self, capsys):
        assert main(["generate", "golomb-ruler", "--param", "n=3", "--nodv"]) == 0
        inst = parse_instance(capsys.readouterr().out)
        assert inst.decision_variables == ()

    def test_unknown_flag_rejected(self, capsys):
        with pytest.raises(SystemExit) as err:
            main(["generate", "dubois", "--param", "n=3", "--bogus"])
        assert err.value.code == 2


class TestVerifyCommand:
    def test_valid_and_invalid(self, tmp_path, capsys):
        inst_path = tmp_path / "k.xml"
        inst_path.write_text(write_instance(gen_knapsack(KNAPSACK_DATA)))
        good = tmp_path / "good.xml"
        good.write_text(write_solution(Assignment({f"x[{i}]": 1 for i in range(5)})))
        assert main(["verify", str(inst_path), str(good), "--bound", "283"]) == 0
        assert "VALID" in capsys.readouterr().out
        bad = tmp_path / "bad.xml"
        bad.write_text(write_solution(Assignment({f"x[{i}]": 1 for i in range(4)})))
        assert main(["verify", str(inst_path), str(bad)]) == 1
        assert "Incomplete" in capsys.readouterr().out

    def test_corrupted_value_reports_constraint_index(self, tmp_path, capsys):
        from xcspkit.generators import gen_langford

        inst_path = tmp_path / "langford2.xml"
        inst_path.write_text(write_instance(gen_langford(2)))
        sol = tmp_path / "sol.xml"
        values = {"v[0]": 1, "v[1]": 1, "v[2]": 2, "v[3]": 2, "p[0]": 2, "p[1]": 0, "p[2]": 3, "p[3]": 1}
        sol.write_text(write_solution(Assignment(values)))
        assert main(["verify", str(inst_path), str(sol)]) == 1
        out = capsys.readouterr().out
        assert "constraint" in out and any(ch.isdigit() for ch in out)


class TestRankCommand:
    def test_text_table(self, tmp_path, capsys):
        records = [
            RunRecord("a", "s1", "SAT", None, 1.0),
            RunRecord("b", "s1", "UNSAT", None, 1.0),
            RunRecord("a", "s2", "SAT", None, 2.0),
            RunRecord("b", "s2", "UNKNOWN", None, 2.0),
        ]
        path = tmp_path / "r.csv"
        write_records_csv(records, path)
        assert main(["rank", str(path), "--mode", "csp"]) == 0
        out = capsys.readouterr().out
        assert "Virtual Best Solver" in out
        assert "s1" in out and "s2" in out

    def test_csv_format(self, tmp_path, capsys):
        records = [RunRecord("a", "s1", "OPTIMUM", 5, 1.0)]
        path = tmp_path / "r.csv"
        write_records_csv(records, path)
        assert main(["rank", str(path), "--mode", "cop", "--format", "csv"]) == 0
        out = capsys.readouterr().out
        assert out.splitlines()[0] == "rank,solver,solved,sat,unsat,opt,best,pct_instances,pct_vbs"
