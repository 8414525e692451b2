#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
误差指标测试
"""

import math

import numpy as np
import pytest

from pdmchaos.metrics import central_difference_gradient, max_abs_error, max_relative_error, relative_error


def test_max_abs_error():
    assert max_abs_error([1.0, 2.0], [1.5, 1.0]) == 1.0
    assert max_abs_error([], []) == 0.0


@pytest.mark.parametrize("actual, expected, floor, value", [
    (1.1, 1.0, 1e-12, 0.1),
    (-2.0, -4.0, 1e-12, 0.5),
    (1e-3, 0.0, 1.0, 1e-3),
])
def test_relative_error(actual, expected, floor, value):
    assert relative_error(actual, expected, floor=floor) == pytest.approx(value)


def test_max_relative_error_uses_floor():
    actual = np.array([1e-3, 10.5])
    expected = np.array([0.0, 10.0])
    assert max_relative_error(actual, expected, floor=1.0) == pytest.approx(0.05)
    assert max_relative_error([], []) == 0.0


def test_central_difference_gradient():
    dx, dy = central_difference_gradient(lambda x, y: math.sin(x) * y ** 2, 0.3, 2.0)
    assert dx == pytest.approx(math.cos(0.3) * 4.0, rel=1e-8)
    assert dy == pytest.approx(math.sin(0.3) * 4.0, rel=1e-8)
