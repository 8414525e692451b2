#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
异常定义
数值内核只返回状态码，由 Python 层映射为以下异常
"""


class PDMError(Exception):
    """pdmchaos 所有异常的基类"""


class ParameterError(PDMError, ValueError):
    """参数或配置不合法（如 ξ<0、容差非正）"""


class DivergenceError(PDMError, ArithmeticError):
    """状态出现非有限值，或步长下溢"""


class StepBudgetError(PDMError, RuntimeError):
    """积分步数超过 max_steps"""


class DegenerateTangentError(PDMError, ArithmeticError):
    """切向量范数坍缩为数值零（或溢出）"""


class InsufficientDataError(PDMError, ValueError):
    """频闪序列太短，无法做周期检测"""
