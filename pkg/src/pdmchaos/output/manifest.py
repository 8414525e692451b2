#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
运行清单
CSV 内嵌的注释行只包含可复现部分（版本、命令、参数、初值、积分与扫描配置）；
墙钟耗时写入旁路 JSON 文件 <out>.manifest.json，不进入数据字节。
"""

import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional

import ujson

from ..errors import ParameterError
from ..integrate import IntegratorConfig
from ..model import DEFAULT_INITIAL_STATE, Params, State

TOOL_NAME = "pdmchaos"


def _current_version() -> str:
    from .. import __version__
    return __version__


def format_value(value) -> str:
    """清单值的文本形式：浮点 17 位有效数字，None → none，布尔 → true/false"""
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def parse_value(text: str):
    """format_value 的逆：依次尝试 none / 布尔 / 整数 / 浮点，否则保留字符串"""
    if text == "none":
        return None
    if text in ("true", "false"):
        return text == "true"
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


@dataclass
class RunManifest:
    """
    一次运行的完整描述

    Attributes:
        command: 子命令名
        params: 物理参数
        initial: 初始状态
        integrator: 积分配置
        options: 子命令相关的协议参数（暂态、采样数、扫描配置等）
        version: 工具版本
        duration_seconds: 墙钟耗时（只写入旁路文件）
    """
    command: str
    params: Params = field(default_factory=Params)
    initial: State = DEFAULT_INITIAL_STATE
    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)
    options: Dict[str, object] = field(default_factory=dict)
    version: str = field(default_factory=_current_version)
    duration_seconds: Optional[float] = None

    def comment_lines(self) -> List[str]:
        """CSV 注释行（不含 '# ' 前缀），同一清单总是生成相同的行"""
        lines = [f"tool={TOOL_NAME} {self.version}", f"command={self.command}"]
        for key, value in self.params.to_dict().items():
            lines.append(f"params.{key}={format_value(value)}")
        for key, value in zip(("x", "y", "z"), self.initial.as_tuple()):
            lines.append(f"initial.{key}={format_value(value)}")
        for key, value in self.integrator.to_dict().items():
            lines.append(f"integrator.{key}={format_value(value)}")
        for key in sorted(self.options):
            lines.append(f"options.{key}={format_value(self.options[key])}")
        return lines

    @classmethod
    def parse_comment_lines(cls, lines: Iterable[str]) -> "RunManifest":
        """
        从 CSV 注释行重建清单

        Args:
            lines: 注释行，可带或不带 '#' 前缀；无法识别的行被忽略

        Returns:
            RunManifest（duration_seconds 为 None）

        Raises:
            ParameterError: 缺少 command 行或字段不合法
        """
        command = None
        version = _current_version()
        params: Dict[str, float] = {}
        initial: Dict[str, float] = {}
        integrator: Dict[str, object] = {}
        options: Dict[str, object] = {}
        for raw in lines:
            line = raw.lstrip("#").strip()
            if "=" not in line:
                continue
            key, text = line.split("=", 1)
            if key == "tool":
                version = text.split(" ", 1)[-1]
            elif key == "command":
                command = text
            elif key.startswith("params."):
                params[key[len("params."):]] = float(text)
            elif key.startswith("initial."):
                initial[key[len("initial."):]] = float(text)
            elif key.startswith("integrator."):
                integrator[key[len("integrator."):]] = parse_value(text)
            elif key.startswith("options."):
                options[key[len("options."):]] = parse_value(text)
        if command is None:
            raise ParameterError("清单缺少 command 行")
        if "h_max" in integrator and integrator["h_max"] is not None:
            integrator["h_max"] = float(integrator["h_max"])
        for key in ("rel_tol", "abs_tol", "h_init"):
            if key in integrator:
                integrator[key] = float(integrator[key])
        try:
            return cls(
                command=command,
                params=Params(**params),
                initial=State(**initial) if initial else DEFAULT_INITIAL_STATE,
                integrator=IntegratorConfig(**integrator),
                options=options,
                version=version,
            )
        except TypeError as e:
            raise ParameterError(f"清单字段不合法: {e}")

    def to_dict(self) -> Dict[str, object]:
        duration = self.duration_seconds
        if duration is not None and not math.isfinite(duration):
            duration = None
        return {
            "tool": TOOL_NAME,
            "version": self.version,
            "command": self.command,
            "params": self.params.to_dict(),
            "initial": dict(zip(("x", "y", "z"), self.initial.as_tuple())),
            "integrator": self.integrator.to_dict(),
            "options": dict(self.options),
            "duration_seconds": duration,
        }

    def write_sidecar(self, data_path: str) -> str:
        """写出 <data_path>.manifest.json，返回其路径"""
        path = f"{data_path}.manifest.json"
        with open(path, "w", encoding="utf-8") as f:
            ujson.dump(self.to_dict(), f, ensure_ascii=False, indent=2)
        return path
