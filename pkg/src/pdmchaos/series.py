#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
频闪（Poincaré）采样序列
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .model import Params, State


@dataclass(frozen=True)
class StroboSeries:
    """
    每个驱动周期采样一次（samples_per_period>1 时为相图用的等间隔稠密采样）

    Attributes:
        params: 参数快照
        x, y: 采样点
        z: 采样时刻的驱动相位 z0 + omega*t_k
        t: 采样时刻（从积分起点算起）
        n_transient: 丢弃的暂态周期数
        samples_per_period: 每个驱动周期的采样数
        final_state: 最后一个采样点的完整状态（延拓模式的下一个初值）
    """
    params: Params
    x: np.ndarray
    y: np.ndarray
    z: np.ndarray
    t: np.ndarray
    n_transient: int
    samples_per_period: int = 1
    final_state: Optional[State] = None
    n_steps: int = 0

    def __len__(self) -> int:
        return int(self.x.shape[0])

    def amplitude(self) -> float:
        """序列的最大幅度 max(|x|, |y|)"""
        if len(self) == 0:
            return 0.0
        return float(max(np.max(np.abs(self.x)), np.max(np.abs(self.y))))

    @classmethod
    def from_points(cls, x, y, params: Optional[Params] = None, n_transient: int = 0) -> "StroboSeries":
        """由现成的采样点构造序列（测试与外部数据用）"""
        x = np.asarray(x, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64) if y is not None else np.zeros_like(x)
        params = params or Params()
        k = np.arange(x.shape[0], dtype=np.float64)
        t = k * params.drive_period
        return cls(params=params, x=x, y=y, z=params.omega * t, t=t, n_transient=n_transient)
