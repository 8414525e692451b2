#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
命令行测试：子命令输出、退出码、清单与旁路文件
"""

import io

import pytest
import ujson

from pdmchaos.cli import EXIT_NUMERIC, EXIT_OK, EXIT_USAGE, EXIT_VERIFY, build_parser, run
from pdmchaos.output import RunManifest, read_csv
from pdmchaos.verification import CheckResult


def _run(*argv):
    stdout = io.BytesIO()
    code = run(list(argv), stdout=stdout)
    return code, stdout.getvalue()


# =============================================================================
# 退出码
# =============================================================================

class TestExitCodes:
    def test_unknown_flag(self, capsys):
        code, out = _run("phase", "--bogus", "1")
        assert code == EXIT_USAGE
        assert out == b""
        assert "usage" in capsys.readouterr().err

    def test_unknown_command(self):
        assert _run("integrate")[0] == EXIT_USAGE

    def test_missing_command(self):
        assert _run()[0] == EXIT_USAGE

    def test_negative_xi(self, capsys):
        code, out = _run("classify", "--xi", "-0.5")
        assert code == EXIT_USAGE
        assert out == b""
        assert "xi" in capsys.readouterr().err

    @pytest.mark.parametrize("flag, value", [("--x0", "nan"), ("--f", "inf"), ("--rtol", "inf")])
    def test_non_finite_argument(self, flag, value, capsys):
        code, out = _run("simulate", flag, value)
        assert code == EXIT_USAGE
        assert out == b""
        assert flag.lstrip("-") in capsys.readouterr().err

    def test_non_positive_omega(self):
        assert _run("simulate", "--omega", "0")[0] == EXIT_USAGE

    def test_invalid_sweep_range(self):
        assert _run("bifurcation", "--start", "2", "--stop", "1", "--steps", "3")[0] == EXIT_USAGE

    def test_help(self, capsys):
        assert _run("--help")[0] == EXIT_OK
        assert "bifurcation" in capsys.readouterr().out

    def test_step_budget_is_numeric_failure(self):
        code, _ = _run("simulate", "--t1", "100", "--max-steps", "5")
        assert code == EXIT_NUMERIC

    def test_unwritable_output(self, tmp_path):
        target = tmp_path / "missing" / "out.csv"
        code, _ = _run("simulate", "--t1", "1", "--out", str(target))
        assert code == EXIT_NUMERIC


def test_parser_defaults():
    args = build_parser().parse_args(["phase"])
    assert (args.xi, args.omega0_sq, args.lam, args.alpha, args.f, args.omega) == (0.0, 0.25, 1.0, 0.2, 5.0, 1.0)
    assert (args.x0, args.y0, args.z0) == (0.1, 0.1, 0.0)
    assert args.out == "-"


def test_lambda_alias():
    assert build_parser().parse_args(["simulate", "--lambda", "0.5"]).lam == 0.5


# =============================================================================
# 子命令
# =============================================================================

class TestSimulate:
    def test_stdout_csv(self):
        code, out = _run("simulate", "--t1", "5", "--xi", "0.3")
        assert code == EXIT_OK
        table = read_csv(out)
        assert table.kind == "trajectory"
        assert table.columns[0][0] == 0.0 and table.columns[0][-1] == 5.0
        manifest = RunManifest.parse_comment_lines(table.comments)
        assert manifest.command == "simulate"
        assert manifest.params.xi == 0.3

    def test_deterministic_bytes(self):
        assert _run("simulate", "--t1", "5")[1] == _run("simulate", "--t1", "5")[1]


class TestPhase:
    def test_header_and_rows(self):
        code, out = _run("phase", "--transient", "5", "--periods", "2", "--samples-per-period", "10")
        assert code == EXIT_OK
        lines = out.decode().splitlines()
        data = [line for line in lines if not line.startswith("#")]
        assert data[0] == "k,x,y"
        assert len(data) == 1 + 20

    def test_strobe(self):
        code, out = _run("phase", "--transient", "5", "--periods", "40", "--strobe")
        assert code == EXIT_OK
        assert len(read_csv(out)) == 40

    def test_file_svg_and_sidecar(self, tmp_path):
        csv_path = tmp_path / "phase.csv"
        svg_path = tmp_path / "phase.svg"
        code, out = _run("phase", "--transient", "5", "--periods", "2", "--samples-per-period", "25",
                         "--out", str(csv_path), "--svg", str(svg_path))
        assert code == EXIT_OK
        assert out == b""
        assert len(read_csv(str(csv_path))) == 50
        assert svg_path.read_text(encoding="utf-8").count("<circle") == 50
        with open(f"{csv_path}.manifest.json", encoding="utf-8") as f:
            payload = ujson.load(f)
        assert payload["command"] == "phase"
        assert payload["duration_seconds"] >= 0.0

    def test_file_bytes_independent_of_timing(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        _run("phase", "--transient", "5", "--periods", "2", "--out", str(a))
        _run("phase", "--transient", "5", "--periods", "2", "--out", str(b))
        assert a.read_bytes() == b.read_bytes()


class TestSweeps:
    def test_bifurcation_rows(self):
        code, out = _run("bifurcation", "--axis", "xi", "--start", "0", "--stop", "1", "--steps", "3",
                         "--transient", "10", "--samples", "32", "--no-progress", "--threads", "2")
        assert code == EXIT_OK
        table = read_csv(out)
        assert table.header == ("param", "k", "x", "y")
        assert len(table) == 3 * 32
        manifest = RunManifest.parse_comment_lines(table.comments)
        assert manifest.options["axis"] == "xi"
        assert manifest.options["steps"] == 3

    def test_bifurcation_threads_do_not_change_bytes(self):
        argv = ["bifurcation", "--start", "1", "--stop", "4", "--steps", "4", "--transient", "10",
                "--samples", "32", "--no-progress"]
        assert _run(*argv, "--threads", "1")[1] == _run(*argv, "--threads", "4")[1]

    def test_lyapunov_rows(self):
        code, out = _run("lyapunov", "--axis", "xi", "--start", "0", "--stop", "1", "--steps", "2",
                         "--lam", "0", "--f", "0", "--no-progress")
        assert code == EXIT_OK
        table = read_csv(out)
        assert table.header == ("param", "lambda_max")
        assert list(table.columns[1]) == pytest.approx([-0.1, -0.1], abs=0.01)


class TestClassify:
    def test_rest_state(self):
        code, out = _run("classify", "--f", "0", "--x0", "0", "--y0", "0")
        assert code == EXIT_OK
        lines = out.decode().splitlines()
        assert lines[0] == "Periodic(1)"
        assert lines[1].startswith("lambda_max=")
        assert lines[1].endswith("detected_period=1")

    @pytest.mark.slow
    def test_period_four_panel(self):
        code, out = _run("classify", "--f", "5", "--xi", "0.4")
        assert code == EXIT_OK
        assert out.decode().splitlines()[0] == "Periodic(4)"


class TestVerify:
    def test_all_checks_pass(self):
        code, out = _run("verify")
        assert code == EXIT_OK
        assert out.decode().rstrip().endswith("8/8 checks passed")

    def test_failed_check_exit_code(self, monkeypatch):
        failing = [CheckResult(name="broken", passed=False, value=1.0, threshold="< 0")]
        monkeypatch.setattr("pdmchaos.cli.run_checks", lambda logger=None: failing)
        code, out = _run("verify")
        assert code == EXIT_VERIFY
        assert b"FAIL" in out


def test_json_log_mode(capsys):
    _run("simulate", "--t1", "1", "--log-mode", "json")
    err_lines = [line for line in capsys.readouterr().err.splitlines() if line.strip()]
    events = [ujson.loads(line)["event"] for line in err_lines]
    assert events[0] == "cli_start"
    assert events[-1] == "cli_done"
