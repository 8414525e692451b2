#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
CSV 输出
格式：'# ' 开头的清单注释行，然后一行表头，然后数据行；浮点数按 17 位有效数字写出，
保证双精度往返精确。解析后再写出与原文件逐字节相同。
"""

import os
from dataclasses import dataclass
from typing import BinaryIO, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..errors import ParameterError

TABLE_HEADERS: Dict[str, Tuple[str, ...]] = {
    "trajectory": ("t", "x", "y", "z"),
    "strobe": ("k", "x", "y"),
    "bifurcation": ("param", "k", "x", "y"),
    "lyapunov": ("param", "lambda_max"),
}

# 以整数写出的列
INTEGER_COLUMNS = {"k"}


@dataclass(frozen=True)
class CsvTable:
    """
    按列存放的数据表

    Attributes:
        kind: trajectory | strobe | bifurcation | lyapunov
        columns: 与表头一一对应的一维数组，长度相同
        comments: 注释行（不含 '# ' 前缀）
    """
    kind: str
    columns: Tuple[np.ndarray, ...]
    comments: Tuple[str, ...] = ()

    def __post_init__(self):
        if self.kind not in TABLE_HEADERS:
            raise ParameterError(f"未知的表类型: {self.kind}")
        if len(self.columns) != len(self.header):
            raise ParameterError(f"{self.kind} 表需要 {len(self.header)} 列，实际 {len(self.columns)}")
        lengths = {int(np.asarray(c).shape[0]) for c in self.columns}
        if len(lengths) > 1:
            raise ParameterError(f"各列长度不一致: {sorted(lengths)}")

    @property
    def header(self) -> Tuple[str, ...]:
        return TABLE_HEADERS[self.kind]

    def __len__(self) -> int:
        return int(np.asarray(self.columns[0]).shape[0])

    def with_comments(self, comments: Sequence[str]) -> "CsvTable":
        return CsvTable(kind=self.kind, columns=self.columns, comments=tuple(comments))


def format_number(value, integer: bool = False) -> str:
    if integer:
        return str(int(value))
    return format(float(value), ".17g")


def format_csv(table: CsvTable) -> str:
    lines: List[str] = [f"# {c}" for c in table.comments]
    lines.append(",".join(table.header))
    formatters = [
        [format_number(v, name in INTEGER_COLUMNS) for v in np.asarray(col).tolist()]
        for name, col in zip(table.header, table.columns)
    ]
    for row in zip(*formatters):
        lines.append(",".join(row))
    return "".join(line + "\n" for line in lines)


def write_csv(table: CsvTable, destination: Union[None, str, os.PathLike, BinaryIO] = None) -> bytes:
    """
    序列化并写出 CSV

    Args:
        table: 数据表
        destination: None 只返回字节；路径则写入文件；否则视为二进制流

    Returns:
        写出的 UTF-8 字节

    Raises:
        OSError: 写入失败
    """
    data = format_csv(table).encode("utf-8")
    if destination is None:
        return data
    if isinstance(destination, (str, os.PathLike)):
        with open(destination, "wb") as f:
            f.write(data)
    else:
        destination.write(data)
        if hasattr(destination, "flush"):
            destination.flush()
    return data


def read_csv(source: Union[str, os.PathLike, bytes]) -> CsvTable:
    """
    解析 write_csv 的输出

    Args:
        source: 文件路径或 CSV 字节

    Returns:
        CsvTable

    Raises:
        ParameterError: 表头不属于已知格式或数据行列数不符
    """
    if isinstance(source, bytes):
        text = source.decode("utf-8")
    else:
        with open(source, "r", encoding="utf-8") as f:
            text = f.read()
    comments: List[str] = []
    header: Optional[Tuple[str, ...]] = None
    rows: List[List[str]] = []
    for line in text.splitlines():
        if header is None and line.startswith("#"):
            comments.append(line[2:] if line.startswith("# ") else line[1:])
            continue
        if header is None:
            header = tuple(line.split(","))
            continue
        if line:
            rows.append(line.split(","))
    kind = next((k for k, h in TABLE_HEADERS.items() if h == header), None)
    if kind is None:
        raise ParameterError(f"无法识别的表头: {header}")
    columns = []
    for i, name in enumerate(header):
        try:
            values = [row[i] for row in rows]
        except IndexError:
            raise ParameterError(f"数据行缺少第 {i + 1} 列")
        if name in INTEGER_COLUMNS:
            columns.append(np.array([int(v) for v in values], dtype=np.int64))
        else:
            columns.append(np.array([float(v) for v in values], dtype=np.float64))
    return CsvTable(kind=kind, columns=tuple(columns), comments=tuple(comments))


# =============================================================================
# 各类数据集到表的转换
# =============================================================================

def trajectory_table(trajectory) -> CsvTable:
    """integrate.Trajectory → t,x,y,z"""
    s = trajectory.states
    return CsvTable("trajectory", (trajectory.t, s[:, 0], s[:, 1], s[:, 2]))


def strobe_table(series) -> CsvTable:
    """StroboSeries → k,x,y"""
    return CsvTable("strobe", (np.arange(len(series)), series.x, series.y))


def bifurcation_table(data) -> CsvTable:
    """sweep.BifurcationData → param,k,x,y，失败点的 x、y 为 nan"""
    return CsvTable("bifurcation", tuple(data.columns()))


def lyapunov_table(scan) -> CsvTable:
    """sweep.LyapunovScan → param,lambda_max"""
    return CsvTable("lyapunov", (scan.values, scan.lambda_max))
