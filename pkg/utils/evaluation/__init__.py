#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
批处理工具模块
提供批处理脚本共用的配置加载、控制台输出与日志记录器
"""

from .eval_common import (
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
