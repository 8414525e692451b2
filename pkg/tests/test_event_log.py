#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
事件日志测试：plain/json 格式、级别过滤、环境变量、日志文件
"""

import io

import ujson

from pdmchaos.event_log import EventLogger, get_event_logger, set_event_logger


def _logger(**kwargs):
    stream = io.StringIO()
    return EventLogger(stream=stream, **kwargs), stream


def test_plain_format():
    logger, stream = _logger(log_mode="plain")
    logger.log("sweep_start", level="info", message="开始", axis="f", steps=500)
    assert stream.getvalue().strip() == "[INFO][sweep_start] 开始 | axis=f | steps=500"


def test_plain_error_suffix():
    logger, stream = _logger()
    logger.log("cli_error", level="error", command="phase", error="boom")
    assert stream.getvalue().strip().endswith("| command=phase | ERROR=boom")


def test_json_format():
    logger, stream = _logger(log_mode="json")
    logger.log("lyapunov_done", level="warn", lambda_max=-0.1)
    payload = ujson.loads(stream.getvalue())
    assert payload["event"] == "lyapunov_done"
    assert payload["level"] == "WARN"
    assert payload["lambda_max"] == -0.1
    assert "ts" in payload


def test_level_filter():
    logger, stream = _logger(log_level="warn")
    logger.log("a", level="info")
    logger.log("b", level="debug")
    logger.log("c", level="error")
    assert stream.getvalue().count("\n") == 1
    assert "[c]" in stream.getvalue()


def test_env_configuration(monkeypatch):
    monkeypatch.setenv("PDM_LOG_MODE", "json")
    monkeypatch.setenv("PDM_LOG_LEVEL", "error")
    logger, _ = _logger()
    assert logger.log_mode == "json" and logger.log_level == "error"
    # 显式参数优先
    logger, _ = _logger(log_mode="plain", log_level="debug")
    assert logger.log_mode == "plain" and logger.log_level == "debug"


def test_invalid_values_fall_back():
    logger, _ = _logger(log_mode="xml", log_level="loud")
    assert logger.log_mode == "plain" and logger.log_level == "info"


def test_log_file(tmp_path):
    path = tmp_path / "logs" / "pdm.log"
    logger, stream = _logger(log_file=str(path))
    logger.log("verify_check", check="ml_exact", passed=True)
    assert path.read_text(encoding="utf-8") == stream.getvalue()


def test_default_instance_is_replaceable():
    logger, _ = _logger()
    set_event_logger(logger)
    assert get_event_logger() is logger
    set_event_logger(None)
    assert get_event_logger() is not logger
