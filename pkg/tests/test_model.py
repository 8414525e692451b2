#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
model 模块测试：质量函数、向量场、雅可比、能量与功率
"""

import math

import numpy as np
import pytest
import sympy as sp

from pdmchaos.errors import DivergenceError, ParameterError
from pdmchaos.model import (
    Params,
    State,
    energy,
    eom_residual,
    hamiltonian,
    jacobian_xy,
    mass,
    mass_prime,
    ml_vector_field,
    potential,
    power_balance_rhs,
    thrust_power,
    vector_field,
)

DEFAULTS = dict(omega0_sq=0.25, lam=1.0, alpha=0.2, f=5.0, omega=1.0)


# =============================================================================
# Params / State
# =============================================================================

class TestParams:
    def test_defaults_match_fixed_values(self):
        p = Params()
        assert (p.omega, p.omega0_sq, p.alpha, p.lam) == (1.0, 0.25, 0.2, 1.0)
        assert p.xi == 0.0

    def test_negative_xi_rejected(self):
        with pytest.raises(ParameterError):
            Params(xi=-0.1)

    @pytest.mark.parametrize("omega", [0.0, -1.0])
    def test_non_positive_omega_rejected(self, omega):
        with pytest.raises(ParameterError):
            Params(omega=omega)

    @pytest.mark.parametrize("value", [float("nan"), float("inf"), True, "1.0"])
    def test_non_finite_or_non_numeric_rejected(self, value):
        with pytest.raises(ParameterError):
            Params(f=value)

    def test_integers_coerced_to_float(self):
        p = Params(xi=1, f=8)
        assert isinstance(p.xi, float) and isinstance(p.f, float)

    def test_parameter_error_is_value_error(self):
        with pytest.raises(ValueError):
            Params(xi=-1.0)

    def test_with_values_revalidates(self):
        p = Params(xi=0.5)
        assert p.with_values(f=8.0).f == 8.0
        with pytest.raises(ParameterError):
            p.with_values(xi=-0.5)

    def test_as_array_order(self):
        p = Params(xi=0.5, omega0_sq=0.3, lam=1.1, alpha=0.2, f=5.0, omega=1.2)
        np.testing.assert_array_equal(p.as_array(), [0.5, 0.3, 1.1, 0.2, 5.0, 1.2])


def test_state_rejects_non_finite():
    with pytest.raises(DivergenceError):
        State(float("nan"), 0.0)
    with pytest.raises(DivergenceError):
        State(0.0, float("inf"))


# =============================================================================
# 质量函数
# =============================================================================

@pytest.mark.parametrize("x, xi, expected", [
    (0.0, 0.5, 1.0),
    (1.0, 1.0, 0.7071067812),
    (2.0, 0.0, 1.0),
])
def test_mass_examples(x, xi, expected):
    assert mass(x, Params(xi=xi)) == pytest.approx(expected, abs=1e-10)


@pytest.mark.parametrize("x, xi, expected", [
    (0.0, 7.0, 0.0),
    (1.0, 1.0, -0.3535533906),
    (5.0, 0.0, 0.0),
])
def test_mass_prime_examples(x, xi, expected):
    assert mass_prime(x, Params(xi=xi)) == pytest.approx(expected, abs=1e-10)


def test_mass_prime_matches_finite_difference():
    p = Params(xi=1.0)
    h = 1e-6
    fd = (mass(1.0 + h, p) - mass(1.0 - h, p)) / (2 * h)
    assert mass_prime(1.0, p) == pytest.approx(fd, rel=1e-8)


def test_mass_decreasing_in_abs_x():
    p = Params(xi=0.7)
    values = [mass(x, p) for x in np.linspace(0.0, 5.0, 50)]
    assert all(a > b for a, b in zip(values, values[1:]))
    assert all(0.0 < v <= 1.0 for v in values)


# =============================================================================
# 向量场与雅可比
# =============================================================================

@pytest.mark.parametrize("state, xi, expected", [
    ((0.0, 1.0, 0.0), 0.5, (1.0, 4.8, 1.0)),
    ((1.0, 0.0, math.pi / 2), 1.0, (0.0, -1.7677669530, 1.0)),
    ((0.0, 0.0, 0.0), 0.0, (0.0, 5.0, 1.0)),
])
def test_vector_field_examples(state, xi, expected):
    d = vector_field(State(*state), Params(xi=xi, **DEFAULTS))
    assert d.x == pytest.approx(expected[0], abs=1e-10)
    assert d.y == pytest.approx(expected[1], abs=1e-9)
    assert d.z == pytest.approx(expected[2], abs=1e-15)


def test_constant_mass_reduces_to_duffing():
    p = Params(xi=0.0, **DEFAULTS)
    rng = np.random.default_rng(7)
    for x, y, z in rng.uniform(-3, 3, size=(20, 3)):
        d = vector_field(State(x, y, z), p)
        duffing = p.f * math.cos(z) - p.omega0_sq * x - p.lam * x * x * x - p.alpha * y
        assert d.y == pytest.approx(duffing, rel=1e-15, abs=1e-13)


def test_parity_equivariance():
    p = Params(xi=0.6, **DEFAULTS)
    s = State(0.7, -1.3, 0.4)
    a = vector_field(s, p)
    b = vector_field(State(-s.x, -s.y, s.z + math.pi), p)
    assert b.x == pytest.approx(-a.x, abs=1e-12)
    assert b.y == pytest.approx(-a.y, abs=1e-12)


@pytest.mark.parametrize("z", [0.0, 1.3, 4.0])
@pytest.mark.parametrize("xi", [0.0, 0.5, 2.0])
def test_jacobian_at_origin(xi, z):
    jac = jacobian_xy(State(0.0, 0.0, z), Params(xi=xi, **DEFAULTS))
    np.testing.assert_allclose(jac.as_array(), [[0.0, 1.0], [-0.25, -0.2]], atol=1e-15)


def test_jacobian_matches_finite_difference_example():
    p = Params(xi=0.5, **DEFAULTS)
    s = State(0.7, -0.3, 1.1)
    jac = jacobian_xy(s, p)
    h = 1e-6
    dx = (vector_field(State(s.x + h, s.y, s.z), p).y - vector_field(State(s.x - h, s.y, s.z), p).y) / (2 * h)
    dy = (vector_field(State(s.x, s.y + h, s.z), p).y - vector_field(State(s.x, s.y - h, s.z), p).y) / (2 * h)
    assert abs(jac.dyx - dx) / abs(jac.dyx) < 1e-5
    assert abs(jac.dyy - dy) / abs(jac.dyy) < 1e-5


def test_jacobian_matches_symbolic_derivative():
    x, y, z, xi, w2, lam, alpha, f = sp.symbols("x y z xi w2 lam alpha f", real=True)
    q = 1 + xi * x ** 2
    g = xi * x * y ** 2 / q + sp.sqrt(q) * (f * sp.cos(z) - w2 * x - lam * x ** 3 - alpha * y)
    gx = sp.lambdify((x, y, z, xi, w2, lam, alpha, f), sp.diff(g, x))
    gy = sp.lambdify((x, y, z, xi, w2, lam, alpha, f), sp.diff(g, y))
    p = Params(xi=0.8, **DEFAULTS)
    rng = np.random.default_rng(11)
    for sx, sy, sz in rng.uniform(-3, 3, size=(25, 3)):
        jac = jacobian_xy(State(sx, sy, sz), p)
        args = (sx, sy, sz, p.xi, p.omega0_sq, p.lam, p.alpha, p.f)
        assert jac.dyx == pytest.approx(gx(*args), rel=1e-10, abs=1e-10)
        assert jac.dyy == pytest.approx(gy(*args), rel=1e-10, abs=1e-10)


def test_eom_residual_vanishes():
    p = Params(xi=0.5, **DEFAULTS)
    rng = np.random.default_rng(3)
    for x, y, z in rng.uniform(-3, 3, size=(100, 3)):
        scale = 1 + abs(p.f) + abs(p.omega0_sq * x) + abs(p.lam * x ** 3) + abs(p.alpha * y)
        assert abs(eom_residual(State(x, y, z), p)) <= 1e-12 * scale


def test_ml_vector_field_admits_exact_solution():
    t, A, xi, w2 = sp.symbols("t A xi w2", positive=True)
    big_omega = sp.sqrt(w2 / (1 + xi * A ** 2))
    xt = A * sp.sin(big_omega * t)
    residual = (1 + xi * xt ** 2) * sp.diff(xt, t, 2) - xi * xt * sp.diff(xt, t) ** 2 + w2 * xt
    residual_fn = sp.lambdify((t, A, xi, w2), residual)
    for tt in np.linspace(0.0, 30.0, 100):
        assert abs(residual_fn(tt, 1.0, 1.0, 0.25)) < 1e-12

    p = Params(xi=1.0, omega0_sq=0.25)
    om = math.sqrt(0.25 / 2.0)
    for tt in np.linspace(0.0, 20.0, 11):
        s = State(math.sin(om * tt), om * math.cos(om * tt))
        assert ml_vector_field(s, p).y == pytest.approx(-om * om * math.sin(om * tt), abs=1e-12)


# =============================================================================
# 能量与功率
# =============================================================================

def test_energy_examples():
    assert energy(State(0.0, 0.0), Params(xi=0.7)).total == 0.0
    for xi in (0.0, 0.5, 3.0):
        assert energy(State(1.0, 0.0), Params(xi=xi)).total == pytest.approx(0.375, abs=1e-15)
    assert energy(State(1.0, 2.0), Params(xi=1.0)).momentum == pytest.approx(1.4142135624, abs=1e-10)


def test_energy_components_consistent():
    p = Params(xi=0.9)
    rng = np.random.default_rng(5)
    for x, y in rng.uniform(-3, 3, size=(100, 2)):
        e = energy(State(x, y), p)
        assert e.kinetic >= 0.0
        assert e.total == e.kinetic + e.potential
        assert e.potential == potential(x, p)


def test_hamiltonian_identity_within_ulps():
    p = Params(xi=0.5)
    rng = np.random.default_rng(9)
    for x, y in rng.uniform(-3, 3, size=(100, 2)):
        s = State(x, y)
        total = energy(s, p).total
        assert abs(hamiltonian(s, p) - total) <= 4 * np.spacing(abs(total))


@pytest.mark.parametrize("state, xi, expected", [
    ((1.0, 1.0), 1.0, 0.1767766953),
    ((0.0, 3.0), 0.8, 0.0),
    ((2.0, 5.0), 0.0, 0.0),
])
def test_thrust_power_examples(state, xi, expected):
    assert thrust_power(State(*state), Params(xi=xi)) == pytest.approx(expected, abs=1e-10)


def test_thrust_power_matches_mass_prime():
    p = Params(xi=1.3)
    s = State(0.8, -1.7)
    assert thrust_power(s, p) == pytest.approx(-0.5 * mass_prime(s.x, p) * s.y ** 3, rel=1e-14)


def test_power_balance_examples():
    assert power_balance_rhs(State(1.0, 1.0), Params(xi=1.0, alpha=0.0, f=0.0)) == pytest.approx(0.1767766953, abs=1e-10)
    for xi in (0.0, 0.4, 2.0):
        assert power_balance_rhs(State(0.0, 1.0, 0.0), Params(xi=xi, alpha=0.2, f=5.0)) == pytest.approx(4.8, abs=1e-12)
    assert power_balance_rhs(State(0.3, 2.0, 1.0), Params(xi=0.0, alpha=0.2, f=0.0)) == pytest.approx(-0.8, abs=1e-12)


def test_power_balance_is_energy_rate():
    """dE/dt 沿向量场的方向导数等于功率平衡右端"""
    p = Params(xi=0.6)
    rng = np.random.default_rng(13)
    h = 1e-6
    for x, y, z in rng.uniform(-2, 2, size=(20, 3)):
        s = State(x, y, z)
        d = vector_field(s, p)
        plus = State(x + h * d.x, y + h * d.y, z)
        minus = State(x - h * d.x, y - h * d.y, z)
        rate = (energy(plus, p).total - energy(minus, p).total) / (2 * h)
        assert rate == pytest.approx(power_balance_rhs(s, p), rel=1e-5, abs=1e-6)
