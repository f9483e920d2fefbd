#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
黑洞角度场与零测地线测试
"""

import math
import sys

sys.path.insert(0, '.')

import numpy as np
import pytest


def _params(lam=1.0, r_g=150.0):
    from src.qwgrav import SchwarzschildParams
    return SchwarzschildParams(r_g=r_g, lam=lam)


def test_params_validation():
    """测试参数校验"""
    from src.qwgrav import SchwarzschildParams
    from src.qwgrav.errors import InvalidInputError

    for r_g, lam in ((0.0, 1.0), (-1.0, 1.0), (150.0, 0.0), (150.0, math.nan), (math.inf, 1.0)):
        with pytest.raises(InvalidInputError):
            SchwarzschildParams(r_g=r_g, lam=lam)
    print("✓ Parameter validation test passed")


def test_radius():
    """测试 r(T, X) 的取值与缩放关系"""
    from src.qwgrav import radius
    from src.qwgrav.errors import DomainError

    assert abs(radius(_params(1.0), 0.0, 100.0) - 150.0) < 1e-9
    assert radius(_params(1.0), 10.0, 10.0) == 0.0
    assert abs(radius(_params(2.0), 0.0, 200.0) - 150.0) < 1e-9

    rng = np.random.default_rng(8)
    T = rng.uniform(0, 50, 50)
    for lam in (0.7, 1.5):
        X = lam * T + rng.uniform(0, 200, 50)
        np.testing.assert_allclose(radius(_params(lam), T, X), radius(_params(1.0), T, X / lam), rtol=1e-13)

    with pytest.raises(DomainError):
        radius(_params(1.0), 10.0, 9.0)
    print("✓ Radius test passed")


def test_coin_angle_values():
    """测试 𝒟 边界、奇点与内部的角度"""
    from src.qwgrav import coin_angle_bh, in_domain_D

    params = _params(1.0)
    assert coin_angle_bh(params, 0.0, 100.0) == 0.0
    assert coin_angle_bh(params, 0.0, 0.0) == 0.5 * math.pi
    assert coin_angle_bh(params, 10.0, 5.0) == 0.5 * math.pi
    assert coin_angle_bh(params, 0.0, 300.0) == 0.0
    # r = 37.5 = r_g/4 时 cosθ = 1/2
    assert abs(coin_angle_bh(params, 0.0, 12.5) - math.pi / 3) < 1e-12

    assert in_domain_D(params, 0.0, 50.0)
    assert in_domain_D(params, 0.0, 100.0)
    assert not in_domain_D(params, 0.0, 100.5)
    assert not in_domain_D(params, 10.0, 9.0)
    print("✓ Coin angle value test passed")


def test_coin_angle_continuity():
    """测试角度在 𝒟 边界与奇点线两侧连续（跳变随偏移趋于零）"""
    from src.qwgrav import coin_angle_bh, domain_boundary_position, singularity_position

    for lam in (0.7, 1.0, 1.5):
        params = _params(lam)
        T = 20.0
        for seam in (domain_boundary_position(params, T), singularity_position(params, T)):
            jumps = [abs(coin_angle_bh(params, T, seam - d) - coin_angle_bh(params, T, seam + d))
                     for d in (1e-3, 1e-6, 1e-9)]
            assert jumps[0] > jumps[1] > jumps[2]
            assert jumps[2] < 1e-2
    print("✓ Coin angle continuity test passed")


def test_field_derivatives():
    """测试黑洞场导数在 𝒟 内部与中心差分一致，外部为零"""
    from src.qwgrav import make_bh_field

    field = make_bh_field(_params(1.0))
    assert not field.is_smooth
    rng = np.random.default_rng(9)
    T = rng.uniform(0, 30, 40)
    X = T + rng.uniform(5.0, 95.0, 40)
    h = 1e-6
    fd_x = (field.angle(T, X + h) - field.angle(T, X - h)) / (2 * h)
    fd_t = (field.angle(T + h, X) - field.angle(T - h, X)) / (2 * h)
    np.testing.assert_allclose(field.angle_x(T, X), fd_x, rtol=1e-6)
    np.testing.assert_allclose(field.angle_t(T, X), fd_t, rtol=1e-6)

    assert float(field.angle_x(0.0, 150.0)) == 0.0
    assert float(field.angle_t(10.0, 5.0)) == 0.0
    print("✓ Field derivative test passed")


def test_lemaitre_metric_identification():
    """测试 𝒟 内 −g_XX = 1/cos²θ"""
    from src.qwgrav import lemaitre_metric, metric_identification_residual
    from src.qwgrav.errors import DomainError

    rng = np.random.default_rng(10)
    for lam in (0.7, 1.0, 1.5):
        params = _params(lam)
        T = rng.uniform(0, 50, 100)
        width = 2.0 * params.r_g / (3.0 * lam ** 2)
        X = lam * T + rng.uniform(0.01, 1.0, 100) * width
        _, g_xx = lemaitre_metric(params, T, X)
        residual = metric_identification_residual(params, T, X)
        assert np.max(residual / np.abs(g_xx)) < 1e-12

    with pytest.raises(DomainError):
        metric_identification_residual(_params(1.0), 0.0, 150.0)
    with pytest.raises(DomainError):
        lemaitre_metric(_params(1.0), 0.0, 0.0)
    print("✓ Lemaitre metric identification test passed")


def test_domain_location():
    """测试 𝒟 相对视界的位置"""
    from src.qwgrav import DomainLocation, domain_location, domain_boundary_position, horizon_position

    assert domain_location(_params(1.5)) is DomainLocation.INSIDE_HORIZON
    assert domain_location(_params(1.0)) is DomainLocation.HORIZON
    assert domain_location(_params(0.7)) is DomainLocation.EXTENDS_OUTSIDE

    params = _params(1.0)
    assert abs(domain_boundary_position(params, 0.0) - horizon_position(params, 0.0)) < 1e-12
    assert abs(horizon_position(params, 0.0) - 100.0) < 1e-12
    assert domain_boundary_position(_params(1.5), 0.0) < horizon_position(_params(1.5), 0.0)
    print("✓ Domain location test passed")


def test_horizon_geodesic():
    """测试 λ = 1 时从视界出发的外向测地线停留在视界上"""
    from src.qwgrav import TerminationReason, horizon_position, integrate_null_geodesic

    params = _params(1.0)
    track = integrate_null_geodesic(params, (0.0, 100.0), +1, 0.05, 200.0)
    assert track.termination is TerminationReason.MAX_TIME
    assert abs(track.T[-1] - 200.0) < 1e-9
    deviation = np.abs(track.X - horizon_position(params, track.T))
    print(f"Max horizon deviation: {deviation.max():.3e}")
    assert deviation.max() < 1e-9 * 200.0
    print("✓ Horizon geodesic test passed")


def test_ingoing_geodesic_reaches_singularity():
    """测试内向测地线终止于奇点"""
    from src.qwgrav import TerminationReason, integrate_null_geodesic

    params = _params(1.0)
    track = integrate_null_geodesic(params, (0.0, 50.5), -1, 0.05, 200.0)
    assert track.termination is TerminationReason.REACHED_SINGULARITY
    s = track.X - params.lam * track.T
    assert np.all(np.diff(s) < 0)
    assert s[-1] < 0.05 * params.lam
    assert track.T[-1] < 50.5
    print("✓ Ingoing geodesic test passed")


def test_exterior_geodesics_are_straight():
    """测试 𝒟 外（θ = 0）测地线为 X = X₀ ± T"""
    from src.qwgrav import integrate_null_geodesic

    params = _params(0.7)
    outgoing = integrate_null_geodesic(params, (0.0, 300.0), +1, 0.05, 50.0)
    np.testing.assert_allclose(outgoing.X, 300.0 + outgoing.T, atol=1e-9)
    ingoing = integrate_null_geodesic(params, (0.0, 300.0), -1, 0.05, 40.0)
    np.testing.assert_allclose(ingoing.X, 300.0 - ingoing.T, atol=1e-9)
    print("✓ Exterior geodesic test passed")


def test_geodesic_speed_and_refinement():
    """测试 |dX/dT| ≤ 1 与步长减半后的端点差"""
    from src.qwgrav import integrate_null_geodesic

    params = _params(1.0)
    coarse = integrate_null_geodesic(params, (0.0, 80.0), +1, 0.05, 50.0)
    fine = integrate_null_geodesic(params, (0.0, 80.0), +1, 0.025, 50.0)
    assert abs(coarse.X[-1] - fine.X[-1]) < 1e-8
    assert np.all(np.abs(np.diff(coarse.X)) <= np.diff(coarse.T) * (1 + 1e-12))
    assert abs(fine.position_at(25.0) - coarse.position_at(25.0)) < 1e-8

    # 从视界出发，T ∈ [0, 300]
    coarse = integrate_null_geodesic(params, (0.0, 100.0), +1, 0.05, 300.0)
    fine = integrate_null_geodesic(params, (0.0, 100.0), +1, 0.025, 300.0)
    assert abs(coarse.T[-1] - 300.0) < 1e-9 and abs(fine.T[-1] - 300.0) < 1e-9
    assert abs(coarse.X[-1] - fine.X[-1]) < 1e-8
    print("✓ Geodesic refinement test passed")


def test_geodesic_velocity_is_signed_cosine():
    """测试测地线速度为 dX/dT = s·cosθ（截断后的 cosθ）"""
    from src.qwgrav import integrate_null_geodesic
    from src.qwgrav.schwarzschild import clamped_cos

    params = _params(1.0)
    for sign in (+1, -1):
        track = integrate_null_geodesic(params, (0.0, 60.0), sign, 0.05, 15.0)
        assert len(track) == 301
        dT = track.T[2:] - track.T[:-2]
        central = (track.X[2:] - track.X[:-2]) / dT
        expected = sign * clamped_cos(params, track.T[1:-1], track.X[1:-1])
        np.testing.assert_allclose(central, expected, atol=1e-5)

    # 𝒟 外 cosθ 截断为 1
    outside = integrate_null_geodesic(_params(0.7), (0.0, 300.0), -1, 0.05, 10.0)
    np.testing.assert_allclose(np.diff(outside.X) / np.diff(outside.T), -1.0, atol=1e-10)
    print("✓ Geodesic velocity test passed")


def test_geodesic_edge_cases():
    """测试零时长、窗口、非法步长与非法起点"""
    from src.qwgrav import TerminationReason, integrate_null_geodesic
    from src.qwgrav.errors import DomainError, InvalidInputError

    params = _params(1.0)
    single = integrate_null_geodesic(params, (0.0, 100.0), +1, 0.05, 0.0)
    assert len(single) == 1
    assert single.termination is TerminationReason.MAX_TIME

    windowed = integrate_null_geodesic(params, (0.0, 150.0), +1, 0.05, 100.0, x_window=(0.0, 160.0))
    assert windowed.termination is TerminationReason.LEFT_GRID
    assert windowed.X[-1] > 160.0

    with pytest.raises(InvalidInputError):
        integrate_null_geodesic(params, (0.0, 100.0), +1, 0.0, 10.0)
    with pytest.raises(InvalidInputError):
        integrate_null_geodesic(params, (0.0, 100.0), 2, 0.05, 10.0)
    with pytest.raises(InvalidInputError):
        integrate_null_geodesic(params, (5.0, 100.0), +1, 0.05, 1.0)
    with pytest.raises(DomainError):
        integrate_null_geodesic(params, (10.0, 5.0), +1, 0.05, 20.0)
    print("✓ Geodesic edge case test passed")


def main():
    print("=" * 50)
    print("Running Schwarzschild tests...")
    print("=" * 50)

    test_params_validation()
    test_radius()
    test_coin_angle_values()
    test_coin_angle_continuity()
    test_field_derivatives()
    test_lemaitre_metric_identification()
    test_domain_location()
    test_horizon_geodesic()
    test_ingoing_geodesic_reaches_singularity()
    test_exterior_geodesics_are_straight()
    test_geodesic_speed_and_refinement()
    test_geodesic_velocity_is_signed_cosine()
    test_geodesic_edge_cases()

    print("=" * 50)
    print("All Schwarzschild tests passed!")
    print("=" * 50)


if __name__ == "__main__":
    main()
