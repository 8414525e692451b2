#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
内置验证套件
只使用模块内部的解析解与恒等式，不需要任何参考数据文件：
- ml_exact: Mathews-Lakshmanan 振子与精确解 A sin(Omega t) 的偏差
- jacobian_fd: 解析雅可比与中心差分
- energy_undriven / energy_driven: 能量定理（功率平衡）
- linear_lyapunov: 线性阻尼振子的 lambda_max = -alpha/2
- eom_residual: 向量场代回拉格朗日运动方程
- hamiltonian: 哈密顿量与总能量一致
- reversibility: 保守系统的时间反演
"""

import math
import time
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

import numpy as np

from . import kernels
from .analysis import lyapunov_max, ml_exact_solution, ml_frequency
from .errors import PDMError
from .event_log import EventLogger, get_event_logger
from .integrate import IntegratorConfig, integrate_adaptive, integrate_power_balance, propagate
from .metrics import central_difference_gradient, max_abs_error, max_relative_error, relative_error
from .model import Params, State, System, energy, eom_residual, hamiltonian, jacobian_xy

VERIFY_SEED = 20240601
RANDOM_STATES = 100


@dataclass(frozen=True)
class CheckResult:
    """
    单项检查结果

    Attributes:
        name: 检查名
        passed: 是否通过
        value: 度量值（误差或估计值）
        threshold: 判定阈值的文字描述
        seconds: 耗时
        detail: 失败原因
    """
    name: str
    passed: bool
    value: float
    threshold: str
    seconds: float = 0.0
    detail: str = ""


def _random_states(n: int, seed: int = VERIFY_SEED) -> np.ndarray:
    rng = np.random.default_rng(seed)
    x = rng.uniform(-3.0, 3.0, n)
    y = rng.uniform(-3.0, 3.0, n)
    z = rng.uniform(0.0, 2.0 * math.pi, n)
    return np.column_stack([x, y, z])


# =============================================================================
# 各项检查：返回 (度量值, 是否通过, 阈值描述)
# =============================================================================

def check_ml_exact() -> Tuple[float, bool, str]:
    p = Params(xi=1.0, omega0_sq=0.25)
    amplitude = 1.0
    big_omega = ml_frequency(amplitude, p)
    cfg = IntegratorConfig(rel_tol=1e-10, abs_tol=1e-10)
    s0 = State(0.0, amplitude * big_omega, 0.0)
    traj = integrate_adaptive(s0, 0.0, 10 * 2.0 * math.pi / big_omega, p, cfg, System.ML)
    x_exact, y_exact = ml_exact_solution(amplitude, traj.t, p)
    err = max(max_abs_error(traj.states[:, 0], x_exact), max_abs_error(traj.states[:, 1], y_exact))
    return err, err < 1e-6, "< 1e-6"


def check_jacobian_fd() -> Tuple[float, bool, str]:
    p = Params(xi=0.5)
    analytic, numeric = [], []
    for x, y, z in _random_states(RANDOM_STATES):
        s = State(x, y, z)
        jac = jacobian_xy(s, p)

        def accel(xx, yy, zz=z):
            return kernels.pdm_accel(xx, yy, zz, p.xi, p.omega0_sq, p.lam, p.alpha, p.f)

        dx, dy = central_difference_gradient(accel, float(x), float(y))
        analytic.extend((jac.dyx, jac.dyy))
        numeric.extend((dx, dy))
    worst = max_relative_error(numeric, analytic, floor=1.0)
    return worst, worst < 1e-5, "< 1e-5 (rel)"


def check_energy_undriven() -> Tuple[float, bool, str]:
    p = Params(xi=0.5, alpha=0.0, f=0.0)
    cfg = IntegratorConfig(rel_tol=1e-11, abs_tol=1e-11)
    result = integrate_power_balance(State(1.0, 0.5, 0.0), 0.0, 20.0, p, cfg)
    err = abs(result.residual)
    return err, err < 1e-6, "< 1e-6"


def check_energy_driven() -> Tuple[float, bool, str]:
    p = Params(xi=0.5)
    cfg = IntegratorConfig(rel_tol=1e-10, abs_tol=1e-10)
    result = integrate_power_balance(State(0.1, 0.1, 0.0), 0.0, 100 * p.drive_period, p, cfg)
    floor = max(abs(result.e0), abs(result.e1), 1.0)
    err = relative_error(result.e1 - result.e0, result.work, floor=floor)
    return err, err < 1e-5, "< 1e-5 (rel)"


def check_linear_lyapunov() -> Tuple[float, bool, str]:
    p = Params(xi=0.0, lam=0.0, f=0.0, alpha=0.2, omega0_sq=0.25)
    result = lyapunov_max(State(0.1, 0.1, 0.0), p)
    value = result.lambda_max
    return value, abs(value + 0.1) <= 0.005, "-0.100 ± 0.005"


def check_eom_residual() -> Tuple[float, bool, str]:
    p = Params(xi=0.5)
    worst = 0.0
    for x, y, z in _random_states(RANDOM_STATES, VERIFY_SEED + 1):
        s = State(x, y, z)
        scale = 1.0 + abs(p.f) + p.omega0_sq * abs(x) + abs(p.lam * x ** 3) + abs(p.alpha * y)
        worst = max(worst, abs(eom_residual(s, p)) / scale)
    return worst, worst < 1e-12, "< 1e-12 (rel)"


def check_hamiltonian() -> Tuple[float, bool, str]:
    p = Params(xi=0.5)
    worst = 0.0
    for x, y, z in _random_states(RANDOM_STATES, VERIFY_SEED + 2):
        s = State(x, y, z)
        total = energy(s, p).total
        worst = max(worst, abs(hamiltonian(s, p) - total) / np.spacing(abs(total)))
    return worst, worst <= 4.0, "<= 4 ulp"


def check_reversibility() -> Tuple[float, bool, str]:
    p = Params(xi=0.5, alpha=0.0, f=0.0)
    cfg = IntegratorConfig(rel_tol=1e-11, abs_tol=1e-11)
    s0 = State(1.0, 0.5, 0.0)
    s1 = propagate(s0, 0.0, 10.0, p, cfg)
    s2 = propagate(State(s1.x, -s1.y, 0.0), 0.0, 10.0, p, cfg)
    err = max(abs(s2.x - s0.x), abs(-s2.y - s0.y))
    return err, err < 1e-6, "< 1e-6"


CHECKS: List[Tuple[str, Callable[[], Tuple[float, bool, str]]]] = [
    ("ml_exact", check_ml_exact),
    ("jacobian_fd", check_jacobian_fd),
    ("energy_undriven", check_energy_undriven),
    ("energy_driven", check_energy_driven),
    ("linear_lyapunov", check_linear_lyapunov),
    ("eom_residual", check_eom_residual),
    ("hamiltonian", check_hamiltonian),
    ("reversibility", check_reversibility),
]


# =============================================================================
# 运行与报告
# =============================================================================

def run_checks(logger: Optional[EventLogger] = None) -> List[CheckResult]:
    """
    依次执行全部检查；数值异常记为失败，不中断后续检查

    Returns:
        CheckResult 列表（顺序与 CHECKS 相同）
    """
    logger = logger or get_event_logger()
    results: List[CheckResult] = []
    for name, check in CHECKS:
        started = time.perf_counter()
        try:
            value, passed, threshold = check()
            detail = ""
        except PDMError as e:
            value, passed, threshold, detail = float("nan"), False, "-", f"{type(e).__name__}: {e}"
        seconds = time.perf_counter() - started
        result = CheckResult(name=name, passed=bool(passed), value=float(value),
                             threshold=threshold, seconds=seconds, detail=detail)
        logger.log("verify_check", level="info" if result.passed else "error", check=name,
                   passed=result.passed, value=result.value, seconds=round(seconds, 3),
                   **({"error": detail} if detail else {}))
        results.append(result)
    return results


def format_report(results: List[CheckResult]) -> str:
    """PASS/FAIL 表格"""
    width = max(len(r.name) for r in results) if results else 4
    lines = [f"{'check':<{width}}  result  {'value':>24}  threshold"]
    for r in results:
        verdict = "PASS" if r.passed else "FAIL"
        line = f"{r.name:<{width}}  {verdict:<6}  {r.value:>24.17g}  {r.threshold}"
        if r.detail:
            line += f"  ({r.detail})"
        lines.append(line)
    passed = sum(1 for r in results if r.passed)
    lines.append(f"{passed}/{len(results)} checks passed")
    return "\n".join(lines)
