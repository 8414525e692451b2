#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
数值内核
向量场、梯度、功率平衡与积分循环，全部是基于标量和 float64 数组的纯函数，
由 numba 编译（nogil，便于线程并行扫描）。numba 不可用时退化为普通 Python，结果一致。

约定：
- 参数数组 prm = [xi, omega0_sq, lam, alpha, f, omega]
- 积分变量 u 只含 (x, y) 及扩展分量；驱动相位按 z = z0 + omega*(t - t_ref) 精确给出
- 内核从不抛异常，只返回状态码
"""

import math

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba 缺失时使用纯 Python
    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]

        def deco(fn):
            return fn
        return deco


# =============================================================================
# 常量
# =============================================================================

SYSTEM_PDM = 0      # 受迫阻尼 PDM Duffing
SYSTEM_ML = 1       # 无驱动 Mathews-Lakshmanan 振子

MODE_PLAIN = 0      # u = (x, y)
MODE_TANGENT = 1    # u = (x, y, v1, v2)
MODE_POWER = 2      # u = (x, y, W)，W 为功率平衡右端的时间积分

STATUS_OK = 0
STATUS_FULL = 1         # 记录缓冲区已满
STATUS_DIVERGED = 2
STATUS_BUDGET = 3
STATUS_UNDERFLOW = 4
STATUS_DEGENERATE = 5

# Dormand-Prince 5(4)
C2 = 1.0 / 5.0
C3 = 3.0 / 10.0
C4 = 4.0 / 5.0
C5 = 8.0 / 9.0

A21 = 1.0 / 5.0
A31 = 3.0 / 40.0
A32 = 9.0 / 40.0
A41 = 44.0 / 45.0
A42 = -56.0 / 15.0
A43 = 32.0 / 9.0
A51 = 19372.0 / 6561.0
A52 = -25360.0 / 2187.0
A53 = 64448.0 / 6561.0
A54 = -212.0 / 729.0
A61 = 9017.0 / 3168.0
A62 = -355.0 / 33.0
A63 = 46732.0 / 5247.0
A64 = 49.0 / 176.0
A65 = -5103.0 / 18656.0

B1 = 35.0 / 384.0
B3 = 500.0 / 1113.0
B4 = 125.0 / 192.0
B5 = -2187.0 / 6784.0
B6 = 11.0 / 84.0

E1 = 71.0 / 57600.0
E3 = -71.0 / 16695.0
E4 = 71.0 / 1920.0
E5 = -17253.0 / 339200.0
E6 = 22.0 / 525.0
E7 = -1.0 / 40.0

SAFETY = 0.9
GROW_MAX = 5.0
SHRINK_MIN = 0.2


# =============================================================================
# 向量场
# =============================================================================

@njit(nogil=True)
def pdm_accel(x, y, z, xi, omega0_sq, lam, alpha, f):
    """ydot = xi*x*y^2/(1+xi*x^2) + sqrt(1+xi*x^2)*[f cos z - w0^2 x - lam x^3 - alpha y]"""
    q = 1.0 + xi * x * x
    force = f * math.cos(z) - omega0_sq * x - lam * x * x * x - alpha * y
    return xi * x * y * y / q + math.sqrt(q) * force


@njit(nogil=True)
def pdm_accel_grad(x, y, z, xi, omega0_sq, lam, alpha, f):
    """pdm_accel 对 (x, y) 的解析偏导"""
    q = 1.0 + xi * x * x
    sq = math.sqrt(q)
    force = f * math.cos(z) - omega0_sq * x - lam * x * x * x - alpha * y
    gx = (xi * y * y * (1.0 - xi * x * x) / (q * q)
          + xi * x * force / sq
          - sq * (omega0_sq + 3.0 * lam * x * x))
    gy = 2.0 * xi * x * y / q - alpha * sq
    return gx, gy


@njit(nogil=True)
def ml_accel(x, y, xi, omega0_sq):
    """Mathews-Lakshmanan: (1+xi x^2) xddot - xi x xdot^2 + w0^2 x = 0"""
    return (xi * x * y * y - omega0_sq * x) / (1.0 + xi * x * x)


@njit(nogil=True)
def ml_accel_grad(x, y, xi, omega0_sq):
    q = 1.0 + xi * x * x
    num = xi * x * y * y - omega0_sq * x
    gx = (xi * y * y - omega0_sq) / q - num * 2.0 * xi * x / (q * q)
    gy = 2.0 * xi * x * y / q
    return gx, gy


@njit(nogil=True)
def thrust_power(x, y, xi):
    """-1/2 m'(x) y^3 = 1/2 xi x y^3 / ((1+xi x^2) sqrt(1+xi x^2))"""
    q = 1.0 + xi * x * x
    return 0.5 * xi * x * y * y * y / (q * math.sqrt(q))


@njit(nogil=True)
def power_balance(x, y, z, xi, alpha, f):
    return thrust_power(x, y, xi) + (-alpha * y * y + f * y * math.cos(z))


@njit(nogil=True)
def rhs(t, u, out, prm, z0, t_ref, system, mode):
    """扩展系统右端，写入 out"""
    x = u[0]
    y = u[1]
    z = z0 + prm[5] * (t - t_ref)
    if system == SYSTEM_ML:
        g = ml_accel(x, y, prm[0], prm[1])
    else:
        g = pdm_accel(x, y, z, prm[0], prm[1], prm[2], prm[3], prm[4])
    out[0] = y
    out[1] = g
    if mode == MODE_TANGENT:
        if system == SYSTEM_ML:
            gx, gy = ml_accel_grad(x, y, prm[0], prm[1])
        else:
            gx, gy = pdm_accel_grad(x, y, z, prm[0], prm[1], prm[2], prm[3], prm[4])
        out[2] = u[3]
        out[3] = gx * u[2] + gy * u[3]
    elif mode == MODE_POWER:
        out[2] = power_balance(x, y, z, prm[0], prm[3], prm[4])


@njit(nogil=True)
def all_finite(u):
    for i in range(u.shape[0]):
        if math.isnan(u[i]) or math.isinf(u[i]):
            return False
    return True


# =============================================================================
# 定步长 RK4
# =============================================================================

@njit(nogil=True)
def rk4_run(u, t0, h, n_steps, prm, z0, t_ref, system, mode):
    """经典四阶 Runge-Kutta，原地推进 n_steps 步，返回 (t, status)"""
    n = u.shape[0]
    k1 = np.empty(n)
    k2 = np.empty(n)
    k3 = np.empty(n)
    k4 = np.empty(n)
    tmp = np.empty(n)
    t = t0
    for s in range(n_steps):
        rhs(t, u, k1, prm, z0, t_ref, system, mode)
        for i in range(n):
            tmp[i] = u[i] + 0.5 * h * k1[i]
        rhs(t + 0.5 * h, tmp, k2, prm, z0, t_ref, system, mode)
        for i in range(n):
            tmp[i] = u[i] + 0.5 * h * k2[i]
        rhs(t + 0.5 * h, tmp, k3, prm, z0, t_ref, system, mode)
        for i in range(n):
            tmp[i] = u[i] + h * k3[i]
        rhs(t + h, tmp, k4, prm, z0, t_ref, system, mode)
        for i in range(n):
            u[i] = u[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
        t = t0 + (s + 1) * h
        if not all_finite(u):
            return t, STATUS_DIVERGED
    return t, STATUS_OK


# =============================================================================
# 自适应 Dormand-Prince 5(4)
# =============================================================================

@njit(nogil=True)
def dopri_segment(u, t, t_end, h, prm, z0, t_ref, system, mode,
                  rtol, atol, h_max, max_steps, rec_t, rec_u):
    """
    从 t 推进到 t_end（最后一步截断，精确落在 t_end），u 原地更新

    rec_t/rec_u 容量为 0 时不记录；否则每个接受步记录一次，缓冲区满时返回 STATUS_FULL，
    调用方清空缓冲区后以返回的 (t, h) 继续。

    Returns:
        (t, h, n_accepted, n_rejected, n_recorded, status)
    """
    n = u.shape[0]
    cap = rec_t.shape[0]
    n_acc = 0
    n_rej = 0
    n_rec = 0
    if t >= t_end:
        return t, h, n_acc, n_rej, n_rec, STATUS_OK

    k1 = np.empty(n)
    k2 = np.empty(n)
    k3 = np.empty(n)
    k4 = np.empty(n)
    k5 = np.empty(n)
    k6 = np.empty(n)
    k7 = np.empty(n)
    tmp = np.empty(n)
    ynew = np.empty(n)

    rhs(t, u, k1, prm, z0, t_ref, system, mode)
    while True:
        if n_acc + n_rej >= max_steps:
            return t, h, n_acc, n_rej, n_rec, STATUS_BUDGET
        if cap > 0 and n_rec >= cap:
            return t, h, n_acc, n_rej, n_rec, STATUS_FULL

        h_try = min(h, h_max)
        remaining = t_end - t
        clamped = False
        if h_try >= remaining or t + h_try >= t_end:
            h_try = remaining
            clamped = True

        for i in range(n):
            tmp[i] = u[i] + h_try * A21 * k1[i]
        rhs(t + C2 * h_try, tmp, k2, prm, z0, t_ref, system, mode)
        for i in range(n):
            tmp[i] = u[i] + h_try * (A31 * k1[i] + A32 * k2[i])
        rhs(t + C3 * h_try, tmp, k3, prm, z0, t_ref, system, mode)
        for i in range(n):
            tmp[i] = u[i] + h_try * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i])
        rhs(t + C4 * h_try, tmp, k4, prm, z0, t_ref, system, mode)
        for i in range(n):
            tmp[i] = u[i] + h_try * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i])
        rhs(t + C5 * h_try, tmp, k5, prm, z0, t_ref, system, mode)
        for i in range(n):
            tmp[i] = u[i] + h_try * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i]
                                     + A64 * k4[i] + A65 * k5[i])
        rhs(t + h_try, tmp, k6, prm, z0, t_ref, system, mode)
        for i in range(n):
            ynew[i] = u[i] + h_try * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i]
                                      + B5 * k5[i] + B6 * k6[i])
        rhs(t + h_try, ynew, k7, prm, z0, t_ref, system, mode)

        # 逐分量误差：|e_i| <= atol + rtol*max(|u_i|, |ynew_i|)
        err = 0.0
        for i in range(n):
            e = h_try * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i]
                         + E6 * k6[i] + E7 * k7[i])
            sc = atol + rtol * max(abs(u[i]), abs(ynew[i]))
            r = abs(e) / sc
            if r > err or math.isnan(r):
                err = r

        finite = all_finite(ynew) and all_finite(k7) and not math.isnan(err) and not math.isinf(err)
        if finite and err <= 1.0:
            if clamped:
                t = t_end
            else:
                t = t + h_try
            for i in range(n):
                u[i] = ynew[i]
                k1[i] = k7[i]
            n_acc += 1
            if cap > 0:
                rec_t[n_rec] = t
                for i in range(n):
                    rec_u[n_rec, i] = u[i]
                n_rec += 1

            if err == 0.0:
                fac = GROW_MAX
            else:
                fac = min(GROW_MAX, max(SHRINK_MIN, SAFETY * err ** -0.2))
            h_new = h_try * fac
            if clamped:
                # 截断步不拖累下一段的步长
                h_new = max(h_new, h)
            h = min(h_new, h_max)
            if clamped:
                return t, h, n_acc, n_rej, n_rec, STATUS_OK
        else:
            n_rej += 1
            if finite:
                fac = max(SHRINK_MIN, SAFETY * err ** -0.2)
            else:
                fac = SHRINK_MIN
            h = h_try * fac
            if h < 1e-14 * max(1.0, abs(t)):
                if finite:
                    return t, h, n_acc, n_rej, n_rec, STATUS_UNDERFLOW
                return t, h, n_acc, n_rej, n_rec, STATUS_DIVERGED


@njit(nogil=True)
def sample_run(u, prm, z0, system, dt, n_skip, n_samples,
               rtol, atol, h_init, h_max, max_steps, out):
    """
    等间隔采样：跳过 n_skip 个间隔后，在 t_j = j*dt (j = n_skip..n_skip+n_samples-1) 精确落点，
    把 (x, y) 写入 out[j - n_skip]。时间从 0 起算，z(t) = z0 + omega*t。

    Returns:
        (status, t, n_steps, n_rejected, h)
    """
    n = u.shape[0]
    rec_t = np.empty(0)
    rec_u = np.empty((0, n))
    t = 0.0
    h = h_init
    steps = 0
    rejected = 0
    for j in range(n_skip + n_samples):
        t_target = j * dt
        if t_target > t:
            t, h, n_acc, n_rej, n_rec, status = dopri_segment(
                u, t, t_target, h, prm, z0, 0.0, system, MODE_PLAIN,
                rtol, atol, h_max, max_steps - steps, rec_t, rec_u)
            steps += n_acc + n_rej
            rejected += n_rej
            if status != STATUS_OK:
                return status, t, steps, rejected, h
        if j >= n_skip:
            out[j - n_skip, 0] = u[0]
            out[j - n_skip, 1] = u[1]
    return STATUS_OK, t, steps, rejected, h


@njit(nogil=True)
def tangent_run(u, prm, z0, system, interval, n_intervals,
                rtol, atol, h_init, h_max, max_steps, log_growth):
    """
    状态与切向量一起推进（同一步长序列）；每个 interval 末记录 ln|v| 并把 v 归一化。
    u = (x, y, v1, v2)，进入时 v 应为单位向量。

    Returns:
        (status, t, n_steps, n_rejected)
    """
    rec_t = np.empty(0)
    rec_u = np.empty((0, u.shape[0]))
    t = 0.0
    h = h_init
    steps = 0
    rejected = 0
    for j in range(1, n_intervals + 1):
        t_target = j * interval
        t, h, n_acc, n_rej, n_rec, status = dopri_segment(
            u, t, t_target, h, prm, z0, 0.0, system, MODE_TANGENT,
            rtol, atol, h_max, max_steps - steps, rec_t, rec_u)
        steps += n_acc + n_rej
        rejected += n_rej
        if status != STATUS_OK:
            return status, t, steps, rejected
        nrm = math.sqrt(u[2] * u[2] + u[3] * u[3])
        if not (nrm > 1e-300) or math.isinf(nrm):
            return STATUS_DEGENERATE, t, steps, rejected
        log_growth[j - 1] = math.log(nrm)
        u[2] = u[2] / nrm
        u[3] = u[3] / nrm
    return STATUS_OK, t, steps, rejected
