"""CLI behavior: JSON-lines output, exit codes, determinism, artifacts."""

import json
import math
import os

import pytest

from hrcplan.cli import main

ALL_PARALLEL_7 = {
    "tasks": [
        {"id": i, "name": f"t{i}", "position": [float(i) / 10, 0.0],
         "effort_human": 0.1, "effort_robot": 0.2, "unsafe_for_human": False}
        for i in range(1, 8)
    ],
    "rules": [],
    "human_start": [0.0, 0.0],
    "robot_start": [1.0, 1.0],
    "tau": 1.0,
    "horizon": 3,
}


@pytest.fixture
def scenario_file(tmp_path):
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(ALL_PARALLEL_7))
    return str(path)


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestRunCommand:
    def test_emits_round_lines_and_summary(self, capsys, scenario_file):
        code, out, _ = run_cli(capsys, "run", "--scenario", scenario_file)
        assert code == 0
        lines = out.strip().split("\n")
        assert len(lines) == 8
        rounds = [json.loads(l) for l in lines[:-1]]
        assert [r["round_index"] for r in rounds] == list(range(1, 8))
        for r in rounds:
            assert set(r) == {
                "round_index", "candidate_count", "best_plan", "executed",
                "human_pos_before", "human_pos_after",
                "robot_pos_before", "robot_pos_after",
            }
        summary = json.loads(lines[-1])
        assert summary["rounds"] == 7
        assert summary["total_cost"] == pytest.approx(
            sum(r["executed"]["step_cost"] for r in rounds))

    def test_byte_identical_repeats(self, capsys, scenario_file):
        _, out1, _ = run_cli(capsys, "run", "--scenario", scenario_file,
                             "--motion", "walk:0.05:42")
        _, out2, _ = run_cli(capsys, "run", "--scenario", scenario_file,
                             "--motion", "walk:0.05:42")
        assert out1.encode() == out2.encode()

    def test_oracle_summary_fields(self, capsys, scenario_file):
        code, out, _ = run_cli(capsys, "run", "--scenario", scenario_file, "--oracle")
        assert code == 0
        summary = json.loads(out.strip().split("\n")[-1])
        assert summary["optimality_gap"] >= -1e-9
        assert summary["total_cost"] == pytest.approx(
            summary["oracle_cost"] + summary["optimality_gap"])

    def test_horizon_override(self, capsys, scenario_file):
        code, out, _ = run_cli(capsys, "run", "--scenario", scenario_file,
                               "--horizon", "1")
        assert code == 0
        first = json.loads(out.split("\n")[0])
        assert first["candidate_count"] == 14  # 7 ready tasks x 2 agents

    def test_out_file(self, capsys, tmp_path, scenario_file):
        out_path = tmp_path / "log.jsonl"
        code, out, _ = run_cli(capsys, "run", "--scenario", scenario_file,
                               "--out", str(out_path))
        assert code == 0
        assert out == ""
        assert len(out_path.read_text().strip().split("\n")) == 8

    def test_cycle_scenario_exits_1(self, capsys, tmp_path):
        doc = dict(ALL_PARALLEL_7, rules=[
            {"before": [1], "after": [2]}, {"before": [2], "after": [1]},
        ])
        path = tmp_path / "cyclic.json"
        path.write_text(json.dumps(doc))
        code, _, err = run_cli(capsys, "run", "--scenario", str(path))
        assert code == 1
        assert "cycle" in err

    def test_missing_file_exits_1(self, capsys):
        code, _, err = run_cli(capsys, "run", "--scenario", "/nonexistent.json")
        assert code == 1
        assert err

    def test_resource_cap_exits_2(self, capsys, tmp_path):
        doc = {
            "tasks": [
                {"id": i, "position": [float(i), 0.0],
                 "effort_human": 0.1, "effort_robot": 0.1}
                for i in range(1, 17)
            ],
            "rules": [],
            "human_start": [0.0, 0.0],
            "robot_start": [0.0, 1.0],
            "horizon": 16,
        }
        path = tmp_path / "huge.json"
        path.write_text(json.dumps(doc))
        code, _, err = run_cli(capsys, "run", "--scenario", str(path))
        assert code == 2
        assert "resource" in err.lower()

    def test_figures_written(self, capsys, tmp_path, scenario_file):
        fig_dir = tmp_path / "figs"
        code, _, _ = run_cli(capsys, "run", "--scenario", scenario_file,
                             "--horizon", "2", "--figures-dir", str(fig_dir))
        assert code == 0
        files = sorted(os.listdir(fig_dir))
        assert files == [f"round_{i:02d}.png" for i in range(1, 8)]


class TestCountCommand:
    def test_all_parallel_full_depth(self, capsys, scenario_file):
        code, out, _ = run_cli(capsys, "count", "--scenario", scenario_file,
                               "--depth", "7")
        assert code == 0
        assert out.strip() == str(math.factorial(7) * 2**7) == "645120"

    def test_bad_depth_exits_1(self, capsys, scenario_file):
        code, _, err = run_cli(capsys, "count", "--scenario", scenario_file,
                               "--depth", "0")
        assert code == 1
        assert "depth" in err


class TestCaseStudyCommand:
    def test_sequence_and_exit_code(self, capsys):
        code, out, _ = run_cli(capsys, "case-study")
        assert code == 0
        lines = out.strip().split("\n")
        assert len(lines) == 8
        executed = [
            (json.loads(l)["executed"]["task"], json.loads(l)["executed"]["agent"])
            for l in lines[:-1]
        ]
        assert executed == [(2, "human"), (1, "human"), (3, "human"),
                            (4, "robot"), (5, "robot"), (6, "robot"), (7, "robot")]

    def test_byte_identical_repeats(self, capsys):
        _, out1, _ = run_cli(capsys, "case-study")
        _, out2, _ = run_cli(capsys, "case-study")
        assert out1.encode() == out2.encode()


class TestBatchCommand:
    def test_writes_report_artifacts(self, capsys, tmp_path):
        config = tmp_path / "batch.json"
        config.write_text(json.dumps({
            "instances": 3, "t_min": 3, "t_max": 4, "seed": 5,
            "horizons": [1, "full"],
        }))
        out_dir = tmp_path / "report"
        code, out, _ = run_cli(capsys, "batch", "--config", str(config),
                               "--out-dir", str(out_dir))
        assert code == 0
        assert out.startswith("policy\t")
        produced = sorted(os.listdir(out_dir))
        assert produced == [
            "candidates_per_round.png", "gap_distribution.png",
            "stats.json", "stats.tsv",
        ]
        stats = json.loads((out_dir / "stats.json").read_text())
        full = next(p for p in stats["policies"] if p["policy"] == "full")
        assert all(abs(g) <= 1e-9 for g in full["gaps"])


class TestArgumentErrors:
    def test_unknown_command_exits_1(self, capsys):
        assert run_cli(capsys, "frobnicate")[0] == 1

    def test_missing_required_flag_exits_1(self, capsys):
        assert run_cli(capsys, "run")[0] == 1
