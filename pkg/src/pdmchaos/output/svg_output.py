#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
SVG 散点图
手写的自包含 SVG：每个数据点一个 <circle>，坐标轴只标最小/最大值。
相同输入总是生成相同字节。
"""

import math
import os
from dataclasses import dataclass
from typing import BinaryIO, Optional, Tuple, Union
from xml.sax.saxutils import escape

import numpy as np

from ..errors import ParameterError

# 数据包围盒向外扩展的比例
BOUNDS_MARGIN = 0.05


@dataclass(frozen=True)
class SvgAxes:
    """
    坐标轴与画布设置

    Attributes:
        x_label, y_label: 轴标签
        annotation: 图上方的参数注释
        width, height: 画布像素
        marker_radius: 点半径
    """
    x_label: str = "x"
    y_label: str = "y"
    annotation: str = ""
    width: int = 800
    height: int = 600
    marker_radius: float = 0.8
    padding: int = 60


def compute_bounds(x: np.ndarray, y: np.ndarray, margin: float = BOUNDS_MARGIN) -> Tuple[float, float, float, float]:
    """
    有限点的包围盒，每边外扩 margin*跨度；跨度为 0 时按 margin*max(|v|, 1) 外扩

    Returns:
        (x_min, x_max, y_min, y_max)

    Raises:
        ParameterError: 没有有限点
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    mask = np.isfinite(x) & np.isfinite(y)
    if not np.any(mask):
        raise ParameterError("数据集为空，拒绝生成 SVG")

    def _expand(values: np.ndarray) -> Tuple[float, float]:
        lo = float(np.min(values))
        hi = float(np.max(values))
        span = hi - lo
        pad = margin * span if span > 0 else margin * max(abs(lo), 1.0)
        return lo - pad, hi + pad

    x_min, x_max = _expand(x[mask])
    y_min, y_max = _expand(y[mask])
    return x_min, x_max, y_min, y_max


def _fmt(v: float) -> str:
    return f"{v:.3f}"


def render_svg(x, y, axes: Optional[SvgAxes] = None) -> str:
    """
    渲染散点图

    Args:
        x, y: 点坐标；非有限点（扫描失败点）不绘制
        axes: 坐标轴设置

    Returns:
        SVG 文档文本

    Raises:
        ParameterError: 数据集为空或坐标范围非有限
    """
    axes = axes or SvgAxes()
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.size == 0:
        raise ParameterError("数据集为空，拒绝生成 SVG")
    x_min, x_max, y_min, y_max = compute_bounds(x, y)
    if not all(math.isfinite(v) for v in (x_min, x_max, y_min, y_max)):
        raise ParameterError("坐标范围非有限")

    w, h, pad = axes.width, axes.height, axes.padding
    plot_w = w - 2 * pad
    plot_h = h - 2 * pad

    def to_px(px: float, py: float) -> Tuple[float, float]:
        sx = pad + (px - x_min) / (x_max - x_min) * plot_w
        sy = pad + (y_max - py) / (y_max - y_min) * plot_h
        return sx, sy

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
        f'<rect x="0" y="0" width="{w}" height="{h}" fill="#ffffff"/>',
        f'<rect x="{pad}" y="{pad}" width="{plot_w}" height="{plot_h}" fill="none" stroke="#333333" stroke-width="1"/>',
    ]
    if axes.annotation:
        parts.append(f'<text x="{w / 2:.1f}" y="{pad / 2:.1f}" text-anchor="middle" '
                     f'font-family="sans-serif" font-size="14">{escape(axes.annotation)}</text>')
    # 轴标签与最小/最大值
    parts.append(f'<text x="{w / 2:.1f}" y="{h - 12}" text-anchor="middle" font-family="sans-serif" '
                 f'font-size="13">{escape(axes.x_label)}</text>')
    parts.append(f'<text x="16" y="{h / 2:.1f}" text-anchor="middle" font-family="sans-serif" font-size="13" '
                 f'transform="rotate(-90 16 {h / 2:.1f})">{escape(axes.y_label)}</text>')
    parts.append(f'<text x="{pad}" y="{h - pad + 16}" font-family="sans-serif" font-size="11">{x_min:.4g}</text>')
    parts.append(f'<text x="{w - pad}" y="{h - pad + 16}" text-anchor="end" font-family="sans-serif" '
                 f'font-size="11">{x_max:.4g}</text>')
    parts.append(f'<text x="{pad - 6}" y="{h - pad}" text-anchor="end" font-family="sans-serif" '
                 f'font-size="11">{y_min:.4g}</text>')
    parts.append(f'<text x="{pad - 6}" y="{pad + 10}" text-anchor="end" font-family="sans-serif" '
                 f'font-size="11">{y_max:.4g}</text>')

    parts.append('<g fill="#1f3b73">')
    r = _fmt(axes.marker_radius)
    for px, py in zip(x.tolist(), y.tolist()):
        if not (math.isfinite(px) and math.isfinite(py)):
            continue
        sx, sy = to_px(px, py)
        parts.append(f'<circle cx="{_fmt(sx)}" cy="{_fmt(sy)}" r="{r}"/>')
    parts.append('</g>')
    parts.append('</svg>')
    return "\n".join(parts) + "\n"


def write_svg(document: str, destination: Union[str, os.PathLike, BinaryIO]) -> bytes:
    data = document.encode("utf-8")
    if isinstance(destination, (str, os.PathLike)):
        with open(destination, "wb") as f:
            f.write(data)
    else:
        destination.write(data)
    return data
