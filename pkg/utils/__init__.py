#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
通用工具模块
提供脚本层复用的工具函数和类，不参与数值计算

子模块：
- evaluation: 批处理配置与日志
"""

from .evaluation.eval_common import (
    load_config,
    print_header,
    print_config,
    get_output_path,
    str_to_bool,
    BaseLogger
)

__all__ = [
    'load_config',
    'print_header',
    'print_config',
    'get_output_path',
    'str_to_bool',
    'BaseLogger',
]
