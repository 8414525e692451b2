#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
pytest 共享配置
- 把 src/ 与项目根目录加入 sys.path
- 注册 slow 标记（图像复现类检查，默认跳过，--runslow 启用）
- 每个测试使用独立的静默事件日志
"""

import io
import sys
from pathlib import Path

import pytest

# 添加项目路径
sys.path.insert(0, str(Path(__file__).parent.parent))
sys.path.insert(0, str(Path(__file__).parent.parent / 'src'))

from pdmchaos.event_log import EventLogger, set_event_logger  # noqa: E402


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="运行 slow 标记的测试")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: 图像复现类的长时间检查")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="需要 --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(autouse=True)
def quiet_logger(monkeypatch):
    """默认日志写入内存，测试结束后复位"""
    for name in ("PDM_LOG_MODE", "PDM_LOG_LEVEL", "PDM_LOG_FILE", "PDM_THREADS"):
        monkeypatch.delenv(name, raising=False)
    stream = io.StringIO()
    logger = EventLogger(log_level="debug", stream=stream)
    set_event_logger(logger)
    yield logger
    set_event_logger(None)
