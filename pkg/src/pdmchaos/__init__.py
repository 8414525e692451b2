#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
pdmchaos - 位置相关质量（PDM）受迫阻尼 Duffing 振子的模拟与混沌分析工具

相图、分岔图、最大 Lyapunov 指数与吸引子分类，并内置能量定理等数值验证
"""

__version__ = "0.1.0"
__author__ = "pdmchaos Project"

from .analysis import (
    AttractorKind,
    Classification,
    LyapunovResult,
    accepts_period,
    classify,
    classify_evidence,
    detect_period,
    lyapunov_max,
    ml_exact_solution,
)
from .errors import (
    DegenerateTangentError,
    DivergenceError,
    InsufficientDataError,
    ParameterError,
    PDMError,
    StepBudgetError,
)
from .integrate import (
    IntegratorConfig,
    Trajectory,
    integrate_adaptive,
    integrate_phase_portrait,
    integrate_strobe,
    integrate_with_tangent,
    rk4_step,
)
from .model import DEFAULT_INITIAL_STATE, Params, State, System
from .series import StroboSeries
from .sweep import BifurcationData, ICMode, SweepAxis, SweepConfig, bifurcation_scan, lyapunov_scan

__all__ = [
    # 模型
    'Params',
    'State',
    'System',
    'DEFAULT_INITIAL_STATE',
    # 积分
    'IntegratorConfig',
    'Trajectory',
    'StroboSeries',
    'rk4_step',
    'integrate_adaptive',
    'integrate_strobe',
    'integrate_phase_portrait',
    'integrate_with_tangent',
    # 分析
    'AttractorKind',
    'Classification',
    'LyapunovResult',
    'accepts_period',
    'detect_period',
    'lyapunov_max',
    'classify',
    'classify_evidence',
    'ml_exact_solution',
    # 扫描
    'SweepAxis',
    'ICMode',
    'SweepConfig',
    'BifurcationData',
    'bifurcation_scan',
    'lyapunov_scan',
    # 异常
    'PDMError',
    'ParameterError',
    'DivergenceError',
    'StepBudgetError',
    'DegenerateTangentError',
    'InsufficientDataError',
]
