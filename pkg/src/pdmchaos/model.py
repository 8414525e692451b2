#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
物理模型
质量函数 m(x) = 1/sqrt(1+xi x^2)、受迫 PDM Duffing 向量场、雅可比、能量与功率定理。
所有函数都是状态与参数的纯函数，可在任意线程并发调用。
"""

import math
import numbers
from dataclasses import dataclass, field, replace, asdict
from enum import IntEnum
from typing import Dict

import numpy as np

from . import kernels
from .errors import DivergenceError, ParameterError


class System(IntEnum):
    """可积分的方程"""
    PDM = kernels.SYSTEM_PDM    # 受迫阻尼 PDM Duffing
    ML = kernels.SYSTEM_ML      # 无驱动 Mathews-Lakshmanan 振子


# =============================================================================
# 数据类型
# =============================================================================

@dataclass(frozen=True)
class Params:
    """
    运动方程的六个物理参数，默认值取 omega=1.0, omega0^2=0.25, alpha=0.2, lambda=1.0，
    f=5.0 对应相图基准。

    Attributes:
        xi: PDM 指数，必须 >= 0
        omega0_sq: 固有频率平方
        lam: 四次项系数 lambda
        alpha: 阻尼系数
        f: 驱动幅度
        omega: 驱动角频率，必须 > 0
    """
    xi: float = 0.0
    omega0_sq: float = 0.25
    lam: float = 1.0
    alpha: float = 0.2
    f: float = 5.0
    omega: float = 1.0

    def __post_init__(self):
        for name, value in asdict(self).items():
            if isinstance(value, bool) or not isinstance(value, numbers.Real) or not math.isfinite(value):
                raise ParameterError(f"参数 {name} 必须是有限实数: {value!r}")
            # 统一为 float，避免内核按整数类型重复编译
            object.__setattr__(self, name, float(value))
        if self.xi < 0:
            raise ParameterError(f"PDM 指数 xi 必须 >= 0: {self.xi}")
        if self.omega <= 0:
            raise ParameterError(f"驱动频率 omega 必须 > 0: {self.omega}")

    @property
    def drive_period(self) -> float:
        return 2.0 * math.pi / self.omega

    def with_values(self, **changes) -> "Params":
        return replace(self, **changes)

    def as_array(self) -> np.ndarray:
        """内核使用的参数数组 [xi, omega0_sq, lam, alpha, f, omega]"""
        return np.array([self.xi, self.omega0_sq, self.lam, self.alpha, self.f, self.omega],
                        dtype=np.float64)

    def to_dict(self) -> Dict[str, float]:
        return {k: float(v) for k, v in asdict(self).items()}


@dataclass(frozen=True)
class State:
    """
    扩展相空间 (x, y, z) 中的点

    Attributes:
        x: 位置
        y: 速度 xdot
        z: 驱动相位 omega*t（不取模）
    """
    x: float
    y: float
    z: float = 0.0

    def __post_init__(self):
        for name in ("x", "y", "z"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not (math.isfinite(self.x) and math.isfinite(self.y) and math.isfinite(self.z)):
            raise DivergenceError(f"状态出现非有限值: ({self.x}, {self.y}, {self.z})")

    def as_tuple(self):
        return (self.x, self.y, self.z)


# 扫描与分类的默认初值
DEFAULT_INITIAL_STATE = State(0.1, 0.1, 0.0)


@dataclass(frozen=True)
class EnergyBreakdown:
    kinetic: float
    potential: float
    total: float
    momentum: float


@dataclass(frozen=True)
class Jacobian2:
    """(x, y) 子系统在固定驱动相位下的雅可比 d(xdot, ydot)/d(x, y)，首行恒为 (0, 1)"""
    dyx: float
    dyy: float
    dxx: float = field(default=0.0)
    dxy: float = field(default=1.0)

    def as_array(self) -> np.ndarray:
        return np.array([[self.dxx, self.dxy], [self.dyx, self.dyy]], dtype=np.float64)


# =============================================================================
# 质量函数与向量场
# =============================================================================

def mass(x: float, p: Params) -> float:
    """m(x) = 1/sqrt(1+xi x^2)，取值 (0, 1]"""
    return 1.0 / math.sqrt(1.0 + p.xi * x * x)


def mass_prime(x: float, p: Params) -> float:
    """m'(x) = -xi x (1+xi x^2)^(-3/2)"""
    q = 1.0 + p.xi * x * x
    return -p.xi * x / (q * math.sqrt(q))


def vector_field(s: State, p: Params) -> State:
    """
    受迫 PDM Duffing 向量场

    Args:
        s: 相空间点
        p: 物理参数

    Returns:
        (xdot, ydot, zdot)，以 State 形式返回

    Raises:
        DivergenceError: 结果非有限
    """
    ydot = kernels.pdm_accel(s.x, s.y, s.z, p.xi, p.omega0_sq, p.lam, p.alpha, p.f)
    return State(s.y, ydot, p.omega)


def ml_vector_field(s: State, p: Params) -> State:
    """Mathews-Lakshmanan 向量场，只用到 xi 与 omega0_sq；zdot 仍按 omega 推进以保持相位簿记"""
    ydot = kernels.ml_accel(s.x, s.y, p.xi, p.omega0_sq)
    return State(s.y, ydot, p.omega)


def jacobian_xy(s: State, p: Params) -> Jacobian2:
    """ydot 对 (x, y) 的解析线性化，切向量推进所需"""
    gx, gy = kernels.pdm_accel_grad(s.x, s.y, s.z, p.xi, p.omega0_sq, p.lam, p.alpha, p.f)
    return Jacobian2(dyx=gx, dyy=gy)


def eom_residual(s: State, p: Params) -> float:
    """把 vector_field 的 ydot 代回拉格朗日运动方程：m ydot + m' y^2 + w0^2 x + lam x^3 + alpha y - f cos z"""
    ydot = vector_field(s, p).y
    return (mass(s.x, p) * ydot + mass_prime(s.x, p) * s.y * s.y
            + p.omega0_sq * s.x + p.lam * s.x ** 3 + p.alpha * s.y - p.f * math.cos(s.z))


# =============================================================================
# 能量与功率
# =============================================================================

def potential(x: float, p: Params) -> float:
    """V(x) = 1/2 w0^2 x^2 + 1/4 lam x^4"""
    return 0.5 * p.omega0_sq * x * x + 0.25 * p.lam * x ** 4


def energy(s: State, p: Params) -> EnergyBreakdown:
    m = mass(s.x, p)
    kinetic = 0.5 * m * s.y * s.y
    pot = potential(s.x, p)
    return EnergyBreakdown(kinetic=kinetic, potential=pot, total=kinetic + pot, momentum=m * s.y)


def hamiltonian(s: State, p: Params) -> float:
    """H = p^2/(2 m(x)) + V(x)，与 energy().total 在舍入误差内相等"""
    m = mass(s.x, p)
    mom = m * s.y
    return mom * mom / (2.0 * m) + potential(s.x, p)


def thrust_power(s: State, p: Params) -> float:
    """非势力的功率 dE/dt = -1/2 m'(x) y^3"""
    return kernels.thrust_power(s.x, s.y, p.xi)


def power_balance_rhs(s: State, p: Params) -> float:
    """受迫阻尼情形的能量变化率：thrust_power - alpha y^2 + f y cos z"""
    return kernels.power_balance(s.x, s.y, s.z, p.xi, p.alpha, p.f)
