#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
动力学判定
频闪序列周期检测、最大 Lyapunov 指数（切向量重归一化）、吸引子分类，
以及无驱动 Mathews-Lakshmanan 振子的精确解。
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple, Union

import numpy as np

from .errors import InsufficientDataError, ParameterError
from .event_log import EventLogger, get_event_logger
from .integrate import IntegratorConfig, integrate_strobe, integrate_with_tangent, propagate
from .model import DEFAULT_INITIAL_STATE, Params, State
from .series import StroboSeries

# 周期检测：覆盖倍周期级联的 2/4/8 周期与 3 周期窗口
DEFAULT_N_MAX = 16
DEFAULT_TOL_ABS = 1e-4
DEFAULT_TOL_REL = 1e-3
DEFAULT_WINDOW = 64

# |lambda_max| <= 阈值且无周期 → Unresolved
CHAOS_THRESHOLD = 0.01

LYAPUNOV_TRANSIENT_PERIODS = 200
LYAPUNOV_AVERAGE_PERIODS = 2000
LYAPUNOV_MIN_PERIODS = 100


# =============================================================================
# 数据类型
# =============================================================================

class AttractorKind(str, Enum):
    PERIODIC = "Periodic"
    CHAOTIC = "Chaotic"
    UNRESOLVED = "Unresolved"


@dataclass(frozen=True)
class LyapunovResult:
    """
    Attributes:
        lambda_max: 最大 Lyapunov 指数估计（1/时间）
        n_renorms: 重归一化次数
        duration: 平均时长 = n_renorms * renorm_interval
        renorm_interval: 重归一化间隔
    """
    lambda_max: float
    n_renorms: int
    duration: float
    renorm_interval: float
    final_state: Optional[State] = None


@dataclass(frozen=True)
class Classification:
    """
    吸引子分类结果，同时保留两项证据（检测到的周期与 lambda_max）

    Attributes:
        kind: Periodic / Chaotic / Unresolved
        lambda_max: 最大 Lyapunov 指数估计
        detected_period: 周期检测结果（可能为 None）
    """
    kind: AttractorKind
    lambda_max: float
    detected_period: Optional[int] = None

    def __post_init__(self):
        if self.kind is AttractorKind.PERIODIC and not self.detected_period:
            raise ParameterError("Periodic 分类必须带有检测到的周期")

    @property
    def period(self) -> Optional[int]:
        return self.detected_period if self.kind is AttractorKind.PERIODIC else None

    @property
    def label(self) -> str:
        if self.kind is AttractorKind.PERIODIC:
            return f"Periodic({self.detected_period})"
        return self.kind.value

    def __str__(self) -> str:
        return self.label


# =============================================================================
# 周期检测
# =============================================================================

def _lag_within_tolerance(x: np.ndarray, y: np.ndarray, lag: int, start: int, tol: float) -> bool:
    length = len(x)
    dx = np.abs(x[start:] - x[start - lag:length - lag])
    dy = np.abs(y[start:] - y[start - lag:length - lag])
    return bool(np.all(dx <= tol) and np.all(dy <= tol))


def accepts_period(
    series: StroboSeries,
    n: int,
    n_max: int = DEFAULT_N_MAX,
    tol_abs: float = DEFAULT_TOL_ABS,
    tol_rel: float = DEFAULT_TOL_REL,
    window: int = DEFAULT_WINDOW
) -> bool:
    """
    周期 n 是否被接受：n 的每个倍数 m <= n_max 都满足比较窗口内
    |x_k - x_{k-m}| <= tol_abs + tol_rel*A 且 |y_k - y_{k-m}| 同样成立（A 为序列最大幅度）

    n 被接受则 2n（不超过 n_max 时）也被接受。比较窗口取序列末尾 window 个点；
    序列不足 window + n_max 时缩短窗口。

    Raises:
        ParameterError: n 不在 [1, n_max]
        InsufficientDataError: 序列长度 < 2*n_max
    """
    length = len(series)
    if n_max < 1 or not 1 <= n <= n_max:
        raise ParameterError(f"要求 1 <= n <= n_max: n={n}, n_max={n_max}")
    if length < 2 * n_max:
        raise InsufficientDataError(f"序列长度 {length} 小于 2*n_max={2 * n_max}")
    window = min(window, length - n_max)
    tol = tol_abs + tol_rel * series.amplitude()
    start = length - window
    return all(_lag_within_tolerance(series.x, series.y, lag, start, tol)
               for lag in range(n, n_max + 1, n))


def detect_period(
    series: StroboSeries,
    n_max: int = DEFAULT_N_MAX,
    tol_abs: float = DEFAULT_TOL_ABS,
    tol_rel: float = DEFAULT_TOL_REL,
    window: int = DEFAULT_WINDOW
) -> Optional[int]:
    """
    返回被 accepts_period 接受的最小 n <= n_max

    Args:
        series: 频闪序列
        n_max: 最大候选周期
        tol_abs: 绝对容差
        tol_rel: 相对容差（乘以序列幅度）
        window: 比较窗口长度

    Returns:
        周期 n，找不到时返回 None

    Raises:
        InsufficientDataError: 序列长度 < 2*n_max
    """
    if n_max < 1:
        raise ParameterError(f"n_max 必须 >= 1: {n_max}")
    for n in range(1, n_max + 1):
        if accepts_period(series, n, n_max, tol_abs, tol_rel, window):
            return n
    return None


# =============================================================================
# Lyapunov 指数
# =============================================================================

def lyapunov_max(
    s0: State,
    p: Params,
    t_transient: Optional[float] = None,
    t_average: Optional[float] = None,
    cfg: Optional[IntegratorConfig] = None,
    renorm_interval: Optional[float] = None,
    logger: Optional[EventLogger] = None
) -> LyapunovResult:
    """
    先丢弃 t_transient 的暂态，再沿轨道推进切向量，每个重归一化间隔
    （默认一个驱动周期）累加 ln|v|，lambda_max = 累加和 / 平均时长

    Args:
        s0: 初始状态
        p: 物理参数
        t_transient: 暂态时长，默认 200 个驱动周期
        t_average: 平均时长，默认 2000 个驱动周期，至少 100 个
        cfg: 积分配置
        renorm_interval: 重归一化间隔，默认 2*pi/omega

    Returns:
        LyapunovResult
    """
    period = p.drive_period
    t_transient = LYAPUNOV_TRANSIENT_PERIODS * period if t_transient is None else float(t_transient)
    t_average = LYAPUNOV_AVERAGE_PERIODS * period if t_average is None else float(t_average)
    renorm_interval = period if renorm_interval is None else float(renorm_interval)
    if t_average < LYAPUNOV_MIN_PERIODS * period * (1.0 - 1e-12):
        raise ParameterError(f"t_average 至少为 {LYAPUNOV_MIN_PERIODS} 个驱动周期: {t_average}")
    if t_transient < 0:
        raise ParameterError(f"t_transient 不能为负: {t_transient}")
    cfg = cfg or IntegratorConfig()
    logger = logger or get_event_logger()

    s_start = propagate(s0, 0.0, t_transient, p, cfg) if t_transient > 0 else s0
    run = integrate_with_tangent(s_start, (1.0, 0.0), p, t_average, renorm_interval, cfg)
    n_renorms = int(run.log_growth.shape[0])
    duration = n_renorms * renorm_interval
    lam = float(np.sum(run.log_growth) / duration) if n_renorms else 0.0
    logger.log("lyapunov_done", level="debug", xi=p.xi, f=p.f, lambda_max=lam, n_renorms=n_renorms)
    return LyapunovResult(lambda_max=lam, n_renorms=n_renorms, duration=duration,
                          renorm_interval=renorm_interval, final_state=run.final_state)


# =============================================================================
# 分类
# =============================================================================

def classify_evidence(
    period: Optional[int],
    lyapunov: Union[LyapunovResult, float],
    chaos_threshold: float = CHAOS_THRESHOLD
) -> Classification:
    """
    判定规则：
    1. 检测到周期且 lambda_max < 0 → Periodic(n)
    2. 无周期且 lambda_max > chaos_threshold → Chaotic
    3. 其余（证据矛盾或不足）→ Unresolved，不强行贴标签
    """
    lam = lyapunov.lambda_max if isinstance(lyapunov, LyapunovResult) else float(lyapunov)
    if period is not None and lam < 0:
        kind = AttractorKind.PERIODIC
    elif period is None and lam > chaos_threshold:
        kind = AttractorKind.CHAOTIC
    else:
        kind = AttractorKind.UNRESOLVED
    return Classification(kind=kind, lambda_max=lam, detected_period=period)


def classify(
    p: Params,
    s0: State = DEFAULT_INITIAL_STATE,
    n_transient: int = 200,
    n_samples: int = 128,
    n_max: int = DEFAULT_N_MAX,
    tol_abs: float = DEFAULT_TOL_ABS,
    tol_rel: float = DEFAULT_TOL_REL,
    window: int = DEFAULT_WINDOW,
    chaos_threshold: float = CHAOS_THRESHOLD,
    t_transient: Optional[float] = None,
    t_average: Optional[float] = None,
    cfg: Optional[IntegratorConfig] = None,
    logger: Optional[EventLogger] = None
) -> Classification:
    """
    单参数点的吸引子分类：频闪序列周期检测 + 最大 Lyapunov 指数

    Args:
        p: 物理参数
        s0: 初始状态
        n_transient, n_samples: 频闪采样协议
        n_max, tol_abs, tol_rel, window: 周期检测参数
        chaos_threshold: 混沌阈值
        t_transient, t_average: Lyapunov 协议
        cfg: 积分配置

    Returns:
        Classification
    """
    cfg = cfg or IntegratorConfig()
    logger = logger or get_event_logger()
    series = integrate_strobe(s0, p, n_transient=n_transient, n_samples=n_samples, cfg=cfg)
    period = detect_period(series, n_max=n_max, tol_abs=tol_abs, tol_rel=tol_rel, window=window)
    lyap = lyapunov_max(s0, p, t_transient=t_transient, t_average=t_average, cfg=cfg, logger=logger)
    result = classify_evidence(period, lyap, chaos_threshold)
    logger.log("classify_done", level="info", xi=p.xi, f=p.f, label=result.label,
               lambda_max=result.lambda_max, detected_period=period)
    return result


# =============================================================================
# 精确解
# =============================================================================

def ml_exact_solution(
    A: float,
    t: Union[float, np.ndarray],
    p: Params
) -> Tuple[Union[float, np.ndarray], Union[float, np.ndarray]]:
    """
    Mathews-Lakshmanan 振子的周期解 x = A sin(Omega t)，Omega = omega0/sqrt(1+xi A^2)；只用到 xi 与 omega0_sq

    Returns:
        (x, y) = (A sin(Omega t), A Omega cos(Omega t))，t 为数组时返回数组
    """
    big_omega = math.sqrt(p.omega0_sq / (1.0 + p.xi * A * A))
    if np.ndim(t) == 0:
        phase = big_omega * float(t)
        return A * math.sin(phase), A * big_omega * math.cos(phase)
    phase = big_omega * np.asarray(t, dtype=np.float64)
    return A * np.sin(phase), A * big_omega * np.cos(phase)


def ml_frequency(A: float, p: Params) -> float:
    """振幅相关的角频率 Omega = omega0/sqrt(1+xi A^2)"""
    return math.sqrt(p.omega0_sq / (1.0 + p.xi * A * A))
