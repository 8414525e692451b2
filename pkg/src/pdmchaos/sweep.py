#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
参数扫描
沿 f 或 xi 扫描，生成分岔图数据（频闪 x 采样）与 Lyapunov 扫描数据。

并行约定：
- FixedIC：各点互不依赖、无副作用，用线程池并行（数值内核释放 GIL），结果按下标合并
- Continuation：每个点以前一点的末状态为初值，严格顺序执行
"""

import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, NamedTuple, Optional

import numpy as np
from tqdm import tqdm

from .analysis import Classification, LyapunovResult, classify_evidence, detect_period, lyapunov_max
from .errors import PDMError, ParameterError
from .event_log import EventLogger, get_event_logger
from .integrate import IntegratorConfig, integrate_strobe
from .model import DEFAULT_INITIAL_STATE, Params, State


class SweepAxis(str, Enum):
    F = "f"
    XI = "xi"


class ICMode(str, Enum):
    FIXED = "fixed"
    CONTINUATION = "continuation"


# =============================================================================
# 配置
# =============================================================================

@dataclass(frozen=True)
class SweepConfig:
    """
    扫描配置

    Attributes:
        axis: 扫描参数 (f | xi)
        start, stop: 扫描区间，start < stop
        steps: 等间距点数，>= 2
        base: 其余参数
        initial: FixedIC 模式下每个点的初值
        ic_mode: fixed | continuation
        n_transient: 暂态周期数
        n_samples: 每点频闪采样数
        integrator: 积分配置
        classify_points: 是否对每个点做分类（额外计算 Lyapunov 指数）
    """
    axis: SweepAxis = SweepAxis.F
    start: float = 0.1
    stop: float = 10.0
    steps: int = 500
    base: Params = field(default_factory=Params)
    initial: State = DEFAULT_INITIAL_STATE
    ic_mode: ICMode = ICMode.FIXED
    n_transient: int = 200
    n_samples: int = 128
    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)
    classify_points: bool = False

    def __post_init__(self):
        try:
            object.__setattr__(self, "axis", SweepAxis(self.axis))
            object.__setattr__(self, "ic_mode", ICMode(self.ic_mode))
        except ValueError as e:
            raise ParameterError(str(e))
        if not self.start < self.stop:
            raise ParameterError(f"要求 start < stop: {self.start}, {self.stop}")
        if self.steps < 2:
            raise ParameterError(f"steps 必须 >= 2: {self.steps}")
        if self.n_samples < 1 or self.n_transient < 0:
            raise ParameterError(f"n_samples 必须 >= 1 且 n_transient >= 0")
        if self.axis is SweepAxis.XI and self.start < 0:
            raise ParameterError(f"xi 扫描区间必须非负: start={self.start}")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps)

    def params_at(self, value: float) -> Params:
        return self.base.with_values(**{self.axis.value: float(value)})

    def to_dict(self) -> Dict[str, object]:
        return {
            "axis": self.axis.value,
            "start": float(self.start),
            "stop": float(self.stop),
            "steps": int(self.steps),
            "ic_mode": self.ic_mode.value,
            "n_transient": int(self.n_transient),
            "n_samples": int(self.n_samples),
            "classify_points": bool(self.classify_points),
        }


# =============================================================================
# 结果类型
# =============================================================================

@dataclass(frozen=True)
class BifurcationData:
    """
    分岔图数据：按 (参数值, 采样序号) 排序的行，行数 = steps * n_samples。
    失败点的行 x = y = NaN，并在 failed 中标记。
    """
    axis: SweepAxis
    values: np.ndarray
    x: np.ndarray
    y: np.ndarray
    failed: np.ndarray
    errors: List[Optional[str]]
    classifications: Optional[List[Optional[Classification]]] = None

    @property
    def n_samples(self) -> int:
        return int(self.x.shape[1])

    @property
    def n_rows(self) -> int:
        return int(self.x.size)

    def columns(self):
        """行表的四列 (param, k, x, y)"""
        steps, n = self.x.shape
        param = np.repeat(self.values, n)
        k = np.tile(np.arange(n), steps)
        return param, k, self.x.reshape(-1), self.y.reshape(-1)


@dataclass(frozen=True)
class LyapunovScan:
    axis: SweepAxis
    values: np.ndarray
    lambda_max: np.ndarray
    failed: np.ndarray
    errors: List[Optional[str]]


class _PointResult(NamedTuple):
    index: int
    x: Optional[np.ndarray]
    y: Optional[np.ndarray]
    final_state: Optional[State]
    lambda_max: float
    classification: Optional[Classification]
    error: Optional[str]


# =============================================================================
# 并行度
# =============================================================================

def resolve_workers(requested: Optional[int] = None, logger: Optional[EventLogger] = None) -> int:
    """
    并行线程数：显式参数 > 环境变量 PDM_THREADS > CPU 核数

    Args:
        requested: 显式指定的线程数

    Returns:
        >= 1 的线程数
    """
    if requested is not None:
        if int(requested) < 1:
            raise ParameterError(f"线程数必须 >= 1: {requested}")
        return int(requested)
    env_value = os.getenv("PDM_THREADS")
    if env_value:
        try:
            value = int(env_value)
            if value >= 1:
                return value
        except ValueError:
            pass
        (logger or get_event_logger()).log(
            "sweep_threads_invalid", level="warn", message=f"忽略非法的 PDM_THREADS={env_value!r}")
    return os.cpu_count() or 1


# =============================================================================
# 单点任务
# =============================================================================

def _strobe_point(cfg: SweepConfig, index: int, value: float, s0: State,
                  logger: EventLogger) -> _PointResult:
    p = cfg.params_at(value)
    try:
        series = integrate_strobe(s0, p, n_transient=cfg.n_transient, n_samples=cfg.n_samples,
                                  cfg=cfg.integrator)
        classification = None
        lam = float("nan")
        if cfg.classify_points:
            period = detect_period(series)
            lyap = lyapunov_max(s0, p, cfg=cfg.integrator, logger=logger)
            classification = classify_evidence(period, lyap)
            lam = lyap.lambda_max
        return _PointResult(index, series.x, series.y, series.final_state, lam, classification, None)
    except PDMError as e:
        return _PointResult(index, None, None, None, float("nan"), None, str(e))


def _lyapunov_point(cfg: SweepConfig, index: int, value: float, s0: State,
                    logger: EventLogger) -> _PointResult:
    p = cfg.params_at(value)
    try:
        result: LyapunovResult = lyapunov_max(s0, p, cfg=cfg.integrator, logger=logger)
        return _PointResult(index, None, None, result.final_state, result.lambda_max, None, None)
    except PDMError as e:
        return _PointResult(index, None, None, None, float("nan"), None, str(e))


def _run_points(
    cfg: SweepConfig,
    task: Callable[[SweepConfig, int, float, State, EventLogger], _PointResult],
    workers: Optional[int],
    progress: bool,
    logger: EventLogger,
    desc: str
) -> List[_PointResult]:
    values = cfg.values()
    results: List[Optional[_PointResult]] = [None] * len(values)
    with tqdm(total=len(values), disable=not progress, desc=desc, file=sys.stderr) as bar:
        if cfg.ic_mode is ICMode.CONTINUATION:
            s = cfg.initial
            for i, value in enumerate(values):
                r = task(cfg, i, float(value), s, logger)
                results[i] = r
                # 失败后从配置的初值重新出发
                s = r.final_state if r.error is None and r.final_state is not None else cfg.initial
                bar.update(1)
        else:
            n_workers = min(resolve_workers(workers, logger), len(values))
            if n_workers == 1:
                for i, value in enumerate(values):
                    results[i] = task(cfg, i, float(value), cfg.initial, logger)
                    bar.update(1)
            else:
                with ThreadPoolExecutor(max_workers=n_workers) as executor:
                    futures = [executor.submit(task, cfg, i, float(value), cfg.initial, logger)
                               for i, value in enumerate(values)]
                    for future in as_completed(futures):
                        r = future.result()
                        results[r.index] = r
                        bar.update(1)
    for r in results:
        if r is not None and r.error is not None:
            logger.log("sweep_point_failed", level="warn", axis=cfg.axis.value,
                       value=float(values[r.index]), error=r.error)
    return results


# =============================================================================
# 扫描
# =============================================================================

def bifurcation_scan(
    cfg: SweepConfig,
    workers: Optional[int] = None,
    progress: bool = False,
    logger: Optional[EventLogger] = None
) -> BifurcationData:
    """
    分岔图扫描：每个参数值做一次频闪采样，输出全部暂态后的采样点

    Args:
        cfg: 扫描配置
        workers: 线程数（None 时读 PDM_THREADS）
        progress: 是否显示进度条
        logger: 事件日志

    Returns:
        BifurcationData，行序与执行顺序无关
    """
    logger = logger or get_event_logger()
    started = time.perf_counter()
    logger.log("sweep_start", level="info", kind="bifurcation", **cfg.to_dict())
    results = _run_points(cfg, _strobe_point, workers, progress, logger, "bifurcation")

    steps, n = cfg.steps, cfg.n_samples
    x = np.full((steps, n), np.nan)
    y = np.full((steps, n), np.nan)
    failed = np.zeros(steps, dtype=bool)
    errors: List[Optional[str]] = [None] * steps
    classifications = [None] * steps if cfg.classify_points else None
    for r in results:
        if r.error is not None:
            failed[r.index] = True
            errors[r.index] = r.error
            continue
        x[r.index] = r.x
        y[r.index] = r.y
        if classifications is not None:
            classifications[r.index] = r.classification

    logger.log("sweep_done", level="info", kind="bifurcation", points=steps,
               failed=int(failed.sum()), seconds=round(time.perf_counter() - started, 3))
    return BifurcationData(axis=cfg.axis, values=cfg.values(), x=x, y=y, failed=failed,
                           errors=errors, classifications=classifications)


def lyapunov_scan(
    cfg: SweepConfig,
    workers: Optional[int] = None,
    progress: bool = False,
    logger: Optional[EventLogger] = None
) -> LyapunovScan:
    """每个参数值一个 lambda_max（analysis.lyapunov_max 的默认协议），失败点为 NaN 并标记"""
    logger = logger or get_event_logger()
    started = time.perf_counter()
    logger.log("sweep_start", level="info", kind="lyapunov", **cfg.to_dict())
    results = _run_points(cfg, _lyapunov_point, workers, progress, logger, "lyapunov")

    lam = np.full(cfg.steps, np.nan)
    failed = np.zeros(cfg.steps, dtype=bool)
    errors: List[Optional[str]] = [None] * cfg.steps
    for r in results:
        if r.error is not None:
            failed[r.index] = True
            errors[r.index] = r.error
        else:
            lam[r.index] = r.lambda_max

    logger.log("sweep_done", level="info", kind="lyapunov", points=cfg.steps,
               failed=int(failed.sum()), seconds=round(time.perf_counter() - started, 3))
    return LyapunovScan(axis=cfg.axis, values=cfg.values(), lambda_max=lam, failed=failed,
                        errors=errors)
