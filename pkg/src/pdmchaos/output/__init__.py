#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
输出模块
CSV、SVG 与运行清单
"""

from .csv_output import (
    CsvTable,
    TABLE_HEADERS,
    bifurcation_table,
    format_csv,
    lyapunov_table,
    read_csv,
    strobe_table,
    trajectory_table,
    write_csv,
)
from .manifest import RunManifest
from .svg_output import SvgAxes, compute_bounds, render_svg, write_svg

__all__ = [
    'CsvTable',
    'TABLE_HEADERS',
    'format_csv',
    'write_csv',
    'read_csv',
    'trajectory_table',
    'strobe_table',
    'bifurcation_table',
    'lyapunov_table',
    'RunManifest',
    'SvgAxes',
    'compute_bounds',
    'render_svg',
    'write_svg',
]
