#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
统一事件日志
每个事件输出一行：plain 为人类可读形式，json 为一行 JSON（含时间戳与事件名）
"""

import os
import sys
from datetime import datetime
from typing import Optional, TextIO

import ujson

LEVEL_ORDER = {"debug": 10, "info": 20, "warn": 30, "error": 40}


class EventLogger:
    def __init__(
        self,
        log_mode: Optional[str] = None,
        log_level: Optional[str] = None,
        log_file: Optional[str] = None,
        stream: Optional[TextIO] = None
    ):
        """
        初始化事件日志

        Args:
            log_mode: 日志模式 (plain | json)
            log_level: 日志级别 (debug | info | warn | error)
            log_file: 日志文件路径
            stream: 控制台输出流，默认 stderr（stdout 留给 CSV 数据）
        """
        # 日志模式: 优先参数，其次环境变量，默认 plain
        self.log_mode = (log_mode or os.getenv("PDM_LOG_MODE") or "plain").lower()
        if self.log_mode not in {"plain", "json"}:
            self.log_mode = "plain"
        env_level = (os.getenv("PDM_LOG_LEVEL") or "").lower()
        self.log_level = (log_level or env_level or "info").lower()
        if self.log_level not in LEVEL_ORDER:
            self.log_level = "info"
        self.stream = stream
        self.log_file = log_file or os.getenv("PDM_LOG_FILE")
        if self.log_file:
            log_dir = os.path.dirname(self.log_file)
            if log_dir and not os.path.exists(log_dir):
                try:
                    os.makedirs(log_dir, exist_ok=True)
                except Exception as e:
                    # 创建失败则放弃文件写入
                    self.log_file = None
                    self._emit(f"[WARN][log_init] 无法创建日志目录 {log_dir}: {e}")

    def enabled(self, level: str) -> bool:
        return LEVEL_ORDER.get(level, 20) >= LEVEL_ORDER.get(self.log_level, 20)

    def log(self, event: str, level: str = "info", **data):
        """输出一个事件

        plain 输出：[LEVEL][event] message | key=value ...
        json  输出：{"ts": ..., "event": ..., "level": ..., **data}
        """
        level = (level or "info").lower()
        if level not in LEVEL_ORDER:
            level = "info"
        if not self.enabled(level):
            return
        timestamp = datetime.now().isoformat()
        if self.log_mode == "json":
            payload = {"ts": timestamp, "event": event, "level": level.upper(), **data}
            try:
                line = ujson.dumps(payload, ensure_ascii=False)
            except Exception as e:
                line = f"{{'ts':'{timestamp}','event':'{event}','level':'{level.upper()}','error':'log_json_fail','detail':'{e}'}}"
        else:
            line = f"[{level.upper()}][{event}]"
            if "message" in data:
                line += f" {data['message']}"
            for key, value in data.items():
                if key in {"message", "error"}:
                    continue
                line += f" | {key}={value}"
            if "error" in data:
                line += f" | ERROR={data['error']}"
        self._emit(line)

    def _emit(self, line: str):
        stream = self.stream or sys.stderr
        print(line, file=stream)
        if self.log_file:
            try:
                with open(self.log_file, 'a', encoding='utf-8') as f:
                    f.write(line + '\n')
            except Exception:
                pass


# 全局日志实例（单例模式）
_logger_instance: Optional[EventLogger] = None


def get_event_logger() -> EventLogger:
    """获取进程级默认日志实例（首次调用时按环境变量初始化）"""
    global _logger_instance
    if _logger_instance is None:
        _logger_instance = EventLogger()
    return _logger_instance


def set_event_logger(logger: Optional[EventLogger]):
    """替换默认日志实例（CLI 按命令行参数重新配置时使用）"""
    global _logger_instance
    _logger_instance = logger
