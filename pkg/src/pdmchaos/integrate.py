#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
时间积分
定步长 RK4、自适应 Dormand-Prince 5(4)、精确落点的频闪采样，以及状态+切向量的联合推进。

驱动相位方程 zdot = omega 按 z = z0 + omega*(t - t0) 精确求解，不参与数值积分。
"""

import math
from dataclasses import dataclass, asdict
from typing import Dict, NamedTuple, Optional, Tuple

import numpy as np

from . import kernels
from .errors import (
    DegenerateTangentError,
    DivergenceError,
    ParameterError,
    StepBudgetError,
)
from .event_log import EventLogger, get_event_logger
from .model import Params, State, System, energy
from .series import StroboSeries

# 记录轨迹时每次从内核取回的步数
RECORD_CHUNK = 4096


# =============================================================================
# 配置与结果类型
# =============================================================================

@dataclass(frozen=True)
class IntegratorConfig:
    """
    自适应积分配置

    Attributes:
        rel_tol: 相对容差
        abs_tol: 绝对容差
        h_init: 初始步长
        h_max: 最大步长，None 表示 2*pi/(20*omega)
        max_steps: 步数预算（接受步 + 拒绝步）
    """
    rel_tol: float = 1e-9
    abs_tol: float = 1e-9
    h_init: float = 1e-3
    h_max: Optional[float] = None
    max_steps: int = 10 ** 8

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ParameterError(f"容差必须为正: rel_tol={self.rel_tol}, abs_tol={self.abs_tol}")
        if not self.h_init > 0:
            raise ParameterError(f"h_init 必须为正: {self.h_init}")
        if self.h_max is not None:
            if not self.h_max > 0:
                raise ParameterError(f"h_max 必须为正: {self.h_max}")
            if self.h_init > self.h_max:
                raise ParameterError(f"h_init ({self.h_init}) 不能大于 h_max ({self.h_max})")
        if int(self.max_steps) < 1:
            raise ParameterError(f"max_steps 必须 >= 1: {self.max_steps}")

    def step_cap(self, omega: float) -> float:
        """实际使用的最大步长；默认保证每个驱动周期至少 20 步"""
        cap = self.h_max if self.h_max is not None else 2.0 * math.pi / (20.0 * omega)
        if self.h_init > cap:
            raise ParameterError(f"h_init ({self.h_init}) 不能大于 h_max ({cap})")
        return float(cap)

    def to_dict(self) -> Dict[str, object]:
        return asdict(self)


@dataclass(frozen=True)
class Trajectory:
    """
    自适应积分的输出，t 严格递增

    Attributes:
        t: 采样时刻
        states: (N, 3) 数组，列为 x, y, z
        n_steps: 接受步 + 拒绝步
        n_rejected: 拒绝步数
    """
    t: np.ndarray
    states: np.ndarray
    n_steps: int
    n_rejected: int
    system: System = System.PDM

    def __len__(self) -> int:
        return int(self.t.shape[0])

    def state_at(self, i: int) -> State:
        x, y, z = self.states[i]
        return State(float(x), float(y), float(z))

    @property
    def final(self) -> State:
        return self.state_at(-1)


class TangentRun(NamedTuple):
    final_state: State
    log_growth: np.ndarray
    n_steps: int


class PowerBalance(NamedTuple):
    """能量平衡：residual = E(t1) - E(t0) - W，W 为功率平衡右端的积分"""
    e0: float
    e1: float
    work: float
    residual: float
    final_state: State


# =============================================================================
# 内部工具
# =============================================================================

def _raise_for_status(status: int, t: float, what: str, logger: Optional[EventLogger] = None):
    if status == kernels.STATUS_OK:
        return
    logger = logger or get_event_logger()
    logger.log("integrate_diverged", level="warn", stage=what, t=t, status=int(status))
    if status == kernels.STATUS_BUDGET:
        raise StepBudgetError(f"{what}: 步数预算耗尽 (t={t})")
    if status == kernels.STATUS_DEGENERATE:
        raise DegenerateTangentError(f"{what}: 切向量坍缩 (t={t})")
    if status == kernels.STATUS_UNDERFLOW:
        raise DivergenceError(f"{what}: 步长下溢 (t={t})")
    raise DivergenceError(f"{what}: 状态发散 (t={t})")


def _interval_count(duration: float, interval: float) -> int:
    """floor(duration/interval)，对 2000.0000000001 这类舍入结果取整"""
    ratio = duration / interval
    nearest = round(ratio)
    if abs(ratio - nearest) < 1e-9 * max(1.0, ratio):
        return int(nearest)
    return int(math.floor(ratio))


def _empty_record(n: int) -> Tuple[np.ndarray, np.ndarray]:
    return np.empty(0), np.empty((0, n))


# =============================================================================
# 定步长 RK4
# =============================================================================

def rk4_step(s: State, t: float, h: float, p: Params, system: System = System.PDM) -> State:
    """
    单步经典 RK4

    Args:
        s: 当前状态
        t: 当前时刻（只用于相位簿记）
        h: 步长，h=0 返回原状态
        p: 物理参数
        system: 积分的方程

    Returns:
        推进 h 之后的状态
    """
    if h < 0:
        raise ParameterError(f"步长不能为负: {h}")
    u = np.array([s.x, s.y], dtype=np.float64)
    _, status = kernels.rk4_run(u, float(t), float(h), 1, p.as_array(), s.z, float(t),
                                int(system), kernels.MODE_PLAIN)
    _raise_for_status(status, t + h, "rk4_step")
    return State(float(u[0]), float(u[1]), s.z + p.omega * h)


def integrate_fixed(s0: State, t0: float, h: float, n_steps: int, p: Params,
                    system: System = System.PDM) -> State:
    """连续 n_steps 个 RK4 步，返回终点状态（定步长参考解）"""
    if h < 0 or n_steps < 0:
        raise ParameterError(f"步长与步数不能为负: h={h}, n_steps={n_steps}")
    u = np.array([s0.x, s0.y], dtype=np.float64)
    t, status = kernels.rk4_run(u, float(t0), float(h), int(n_steps), p.as_array(), s0.z,
                                float(t0), int(system), kernels.MODE_PLAIN)
    _raise_for_status(status, t, "integrate_fixed")
    return State(float(u[0]), float(u[1]), s0.z + p.omega * (t - t0))


# =============================================================================
# 自适应积分
# =============================================================================

def integrate_adaptive(
    s0: State,
    t0: float,
    t1: float,
    p: Params,
    cfg: Optional[IntegratorConfig] = None,
    system: System = System.PDM
) -> Trajectory:
    """
    自适应 5(4) 积分，记录每个接受步；最后一步截断使末时刻恰为 t1

    Raises:
        StepBudgetError: 步数预算耗尽
        DivergenceError: 状态发散
    """
    if t1 < t0:
        raise ParameterError(f"要求 t1 >= t0: t0={t0}, t1={t1}")
    cfg = cfg or IntegratorConfig()
    h_max = cfg.step_cap(p.omega)
    prm = p.as_array()
    u = np.array([s0.x, s0.y], dtype=np.float64)
    rec_t = np.empty(RECORD_CHUNK)
    rec_u = np.empty((RECORD_CHUNK, 2))

    times = [np.array([float(t0)])]
    points = [u.reshape(1, 2).copy()]
    t = float(t0)
    h = float(cfg.h_init)
    steps = 0
    rejected = 0
    while True:
        t, h, n_acc, n_rej, n_rec, status = kernels.dopri_segment(
            u, t, float(t1), h, prm, s0.z, float(t0), int(system), kernels.MODE_PLAIN,
            float(cfg.rel_tol), float(cfg.abs_tol), h_max, int(cfg.max_steps) - steps,
            rec_t, rec_u)
        steps += n_acc + n_rej
        rejected += n_rej
        if n_rec:
            times.append(rec_t[:n_rec].copy())
            points.append(rec_u[:n_rec].copy())
        if status == kernels.STATUS_FULL:
            continue
        _raise_for_status(status, t, "integrate_adaptive")
        break

    t_all = np.concatenate(times)
    xy = np.concatenate(points)
    z = s0.z + p.omega * (t_all - float(t0))
    states = np.column_stack([xy, z])
    return Trajectory(t=t_all, states=states, n_steps=steps, n_rejected=rejected, system=system)


def propagate(
    s0: State,
    t0: float,
    t1: float,
    p: Params,
    cfg: Optional[IntegratorConfig] = None,
    system: System = System.PDM
) -> State:
    """自适应推进到 t1，不记录中间点"""
    if t1 < t0:
        raise ParameterError(f"要求 t1 >= t0: t0={t0}, t1={t1}")
    cfg = cfg or IntegratorConfig()
    u = np.array([s0.x, s0.y], dtype=np.float64)
    rec_t, rec_u = _empty_record(2)
    t, _, _, _, _, status = kernels.dopri_segment(
        u, float(t0), float(t1), float(cfg.h_init), p.as_array(), s0.z, float(t0), int(system),
        kernels.MODE_PLAIN, float(cfg.rel_tol), float(cfg.abs_tol), cfg.step_cap(p.omega),
        int(cfg.max_steps), rec_t, rec_u)
    _raise_for_status(status, t, "propagate")
    return State(float(u[0]), float(u[1]), s0.z + p.omega * (float(t1) - float(t0)))


def integrate_power_balance(
    s0: State,
    t0: float,
    t1: float,
    p: Params,
    cfg: Optional[IntegratorConfig] = None
) -> PowerBalance:
    """
    在扩展状态 (x, y, W) 上积分，Wdot = power_balance_rhs，用于验证能量定理

    Returns:
        PowerBalance，residual 应接近 0
    """
    if t1 < t0:
        raise ParameterError(f"要求 t1 >= t0: t0={t0}, t1={t1}")
    cfg = cfg or IntegratorConfig()
    u = np.array([s0.x, s0.y, 0.0], dtype=np.float64)
    rec_t, rec_u = _empty_record(3)
    t, _, _, _, _, status = kernels.dopri_segment(
        u, float(t0), float(t1), float(cfg.h_init), p.as_array(), s0.z, float(t0),
        int(System.PDM), kernels.MODE_POWER, float(cfg.rel_tol), float(cfg.abs_tol),
        cfg.step_cap(p.omega), int(cfg.max_steps), rec_t, rec_u)
    _raise_for_status(status, t, "integrate_power_balance")
    s1 = State(float(u[0]), float(u[1]), s0.z + p.omega * (float(t1) - float(t0)))
    e0 = energy(s0, p).total
    e1 = energy(s1, p).total
    work = float(u[2])
    return PowerBalance(e0=e0, e1=e1, work=work, residual=e1 - e0 - work, final_state=s1)


# =============================================================================
# 频闪采样
# =============================================================================

def _sample_uniform(
    s0: State,
    p: Params,
    dt: float,
    n_skip: int,
    n_samples: int,
    cfg: IntegratorConfig,
    system: System,
    what: str
) -> Tuple[np.ndarray, np.ndarray, int]:
    out = np.empty((n_samples, 2))
    u = np.array([s0.x, s0.y], dtype=np.float64)
    status, t, steps, _, _ = kernels.sample_run(
        u, p.as_array(), s0.z, int(system), float(dt), int(n_skip), int(n_samples),
        float(cfg.rel_tol), float(cfg.abs_tol), float(cfg.h_init), cfg.step_cap(p.omega),
        int(cfg.max_steps), out)
    _raise_for_status(status, t, what)
    j = np.arange(n_skip, n_skip + n_samples, dtype=np.float64)
    return out, j * dt, steps


def integrate_strobe(
    s0: State,
    p: Params,
    n_transient: int = 200,
    n_samples: int = 128,
    cfg: Optional[IntegratorConfig] = None,
    system: System = System.PDM
) -> StroboSeries:
    """
    丢弃 n_transient 个驱动周期后，在 t_k = (n_transient + k)*2*pi/omega 精确落点采样 (x, y)

    Args:
        s0: 初始状态
        p: 物理参数
        n_transient: 暂态周期数
        n_samples: 采样数（>= 1）
        cfg: 积分配置

    Returns:
        长度为 n_samples 的 StroboSeries
    """
    if n_samples < 1 or n_transient < 0:
        raise ParameterError(f"n_samples 必须 >= 1 且 n_transient >= 0: {n_samples}, {n_transient}")
    cfg = cfg or IntegratorConfig()
    period = p.drive_period
    out, t, steps = _sample_uniform(s0, p, period, n_transient, n_samples, cfg, system,
                                    "integrate_strobe")
    z = s0.z + p.omega * t
    final = State(float(out[-1, 0]), float(out[-1, 1]), float(z[-1]))
    get_event_logger().log("strobe_done", level="debug", xi=p.xi, f=p.f, n_samples=n_samples,
                           n_steps=steps)
    return StroboSeries(params=p, x=out[:, 0].copy(), y=out[:, 1].copy(), z=z, t=t,
                        n_transient=int(n_transient), samples_per_period=1,
                        final_state=final, n_steps=steps)


def integrate_phase_portrait(
    s0: State,
    p: Params,
    n_transient: int = 200,
    n_periods: int = 50,
    samples_per_period: int = 100,
    cfg: Optional[IntegratorConfig] = None
) -> StroboSeries:
    """暂态之后每个驱动周期等间隔采 samples_per_period 个点，得到连续相图曲线"""
    if n_periods < 1 or samples_per_period < 1 or n_transient < 0:
        raise ParameterError("n_periods、samples_per_period 必须 >= 1，n_transient >= 0")
    cfg = cfg or IntegratorConfig()
    dt = p.drive_period / samples_per_period
    n_samples = n_periods * samples_per_period
    out, t, steps = _sample_uniform(s0, p, dt, n_transient * samples_per_period, n_samples,
                                    cfg, System.PDM, "integrate_phase_portrait")
    z = s0.z + p.omega * t
    final = State(float(out[-1, 0]), float(out[-1, 1]), float(z[-1]))
    return StroboSeries(params=p, x=out[:, 0].copy(), y=out[:, 1].copy(), z=z, t=t,
                        n_transient=int(n_transient), samples_per_period=int(samples_per_period),
                        final_state=final, n_steps=steps)


# =============================================================================
# 切向动力学
# =============================================================================

def integrate_with_tangent(
    s0: State,
    v0: Tuple[float, float],
    p: Params,
    duration: float,
    renorm_interval: float,
    cfg: Optional[IntegratorConfig] = None,
    system: System = System.PDM
) -> TangentRun:
    """
    联合推进状态与切向量 vdot = J(t) v（同一步长序列）

    每个 renorm_interval 末记录 ln|v| 并把 v 缩放为单位向量；记录数为 floor(duration/renorm_interval)。
    v0 先被归一化，因此每条记录都是该区间上的纯增长量。

    Returns:
        TangentRun(final_state, log_growth, n_steps)

    Raises:
        DegenerateTangentError: 切向量坍缩为数值零
    """
    if not renorm_interval > 0 or duration < 0:
        raise ParameterError(f"renorm_interval 必须 > 0 且 duration >= 0: {renorm_interval}, {duration}")
    norm0 = math.hypot(float(v0[0]), float(v0[1]))
    if not (norm0 > 0 and math.isfinite(norm0)):
        raise ParameterError(f"初始切向量范数必须为正: {v0}")
    cfg = cfg or IntegratorConfig()
    n_intervals = _interval_count(duration, renorm_interval)
    u = np.array([s0.x, s0.y, v0[0] / norm0, v0[1] / norm0], dtype=np.float64)
    log_growth = np.zeros(n_intervals)
    status, t, steps, _ = kernels.tangent_run(
        u, p.as_array(), s0.z, int(system), float(renorm_interval), int(n_intervals),
        float(cfg.rel_tol), float(cfg.abs_tol), float(cfg.h_init), cfg.step_cap(p.omega),
        int(cfg.max_steps), log_growth)
    _raise_for_status(status, t, "integrate_with_tangent")
    final = State(float(u[0]), float(u[1]), s0.z + p.omega * (n_intervals * float(renorm_interval)))
    return TangentRun(final_state=final, log_growth=log_growth, n_steps=steps)
