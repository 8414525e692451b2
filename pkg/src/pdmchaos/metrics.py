#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
数值误差指标
验证套件与测试共用的误差计算函数
"""

from typing import Callable, Tuple

import numpy as np


def max_abs_error(actual, expected) -> float:
    """
    最大绝对误差

    Args:
        actual: 数值结果
        expected: 参考值（形状需与 actual 可广播）

    Returns:
        max |actual - expected|，空输入返回 0.0
    """
    diff = np.abs(np.asarray(actual, dtype=np.float64) - np.asarray(expected, dtype=np.float64))
    if diff.size == 0:
        return 0.0
    return float(np.max(diff))


def relative_error(actual: float, expected: float, floor: float = 1e-12) -> float:
    """|actual - expected| / max(|expected|, floor)"""
    return abs(actual - expected) / max(abs(expected), floor)


def max_relative_error(actual, expected, floor: float = 1e-12) -> float:
    """逐元素相对误差的最大值，分母不小于 floor"""
    actual = np.asarray(actual, dtype=np.float64)
    expected = np.asarray(expected, dtype=np.float64)
    if actual.size == 0:
        return 0.0
    scale = np.maximum(np.abs(expected), floor)
    return float(np.max(np.abs(actual - expected) / scale))


def central_difference_gradient(
    func: Callable[[float, float], float],
    x: float,
    y: float,
    step: float = 1e-6
) -> Tuple[float, float]:
    """
    标量函数 func(x, y) 的中心差分梯度

    Args:
        func: 二元标量函数
        x, y: 求导点
        step: 相对步长，实际步长为 step*max(1, |x|)（y 同理）

    Returns:
        (d func/dx, d func/dy)
    """
    hx = step * max(1.0, abs(x))
    hy = step * max(1.0, abs(y))
    dx = (func(x + hx, y) - func(x - hx, y)) / (2.0 * hx)
    dy = (func(x, y + hy) - func(x, y - hy)) / (2.0 * hy)
    return dx, dy
