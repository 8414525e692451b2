#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
内置验证套件测试
"""

import math

import pytest

from pdmchaos.errors import DivergenceError
from pdmchaos.verification import CHECKS, CheckResult, format_report, run_checks


@pytest.fixture(scope="module")
def results():
    return run_checks()


def test_every_check_passes(results):
    failed = [r.name for r in results if not r.passed]
    assert failed == []
    assert [r.name for r in results] == [name for name, _ in CHECKS]


def test_linear_lyapunov_value(results):
    value = next(r.value for r in results if r.name == "linear_lyapunov")
    assert value == pytest.approx(-0.1, abs=0.005)


def test_hamiltonian_within_four_ulps(results):
    result = next(r for r in results if r.name == "hamiltonian")
    assert result.value <= 4.0
    assert result.threshold == "<= 4 ulp"


def test_jacobian_relative_error(results):
    value = next(r.value for r in results if r.name == "jacobian_fd")
    assert 0.0 <= value < 1e-5


def test_report_summary(results):
    report = format_report(results)
    lines = report.splitlines()
    assert lines[0].startswith("check")
    assert lines[-1] == f"{len(CHECKS)}/{len(CHECKS)} checks passed"
    assert all("PASS" in line for line in lines[1:-1])


def test_failing_check_recorded(monkeypatch, quiet_logger):
    def broken():
        raise DivergenceError("状态发散")

    monkeypatch.setattr("pdmchaos.verification.CHECKS", [("broken", broken)])
    (result,) = run_checks()
    assert not result.passed
    assert math.isnan(result.value)
    assert "DivergenceError" in result.detail
    assert "[verify_check]" in quiet_logger.stream.getvalue()


def test_report_marks_failures():
    report = format_report([
        CheckResult(name="a", passed=True, value=1e-9, threshold="< 1e-6"),
        CheckResult(name="b", passed=False, value=0.5, threshold="< 1e-6", detail="too large"),
    ])
    assert "FAIL" in report and "(too large)" in report
    assert report.splitlines()[-1] == "1/2 checks passed"
