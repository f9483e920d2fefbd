#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
行走引擎测试：单步更新、两步复合、逆更新、概率守恒与边界保护
"""

import math
import sys

sys.path.insert(0, '.')

import numpy as np
import pytest


def _random_state(grid, rng, pad=0, time_index=0, normalized=False):
    """随机振幅，两端 pad 个格点置零，normalized 时总概率为 1"""
    from src.qwgrav import WalkState

    amplitudes = rng.normal(size=(grid.site_count, 2)) + 1j * rng.normal(size=(grid.site_count, 2))
    if pad:
        amplitudes[:pad] = 0.0
        amplitudes[-pad:] = 0.0
    if normalized:
        amplitudes /= np.linalg.norm(amplitudes)
    return WalkState(grid=grid, time_index=time_index, amplitudes=amplitudes)


def test_lattice_grid():
    """测试网格构造与校验"""
    from src.qwgrav import LatticeGrid
    from src.qwgrav.errors import InvalidInputError

    grid = LatticeGrid.covering(-10.2, 10.3, 0.5)
    X = grid.positions
    assert X[0] <= -10.2 and X[-1] >= 10.3
    assert 0.0 in X
    assert grid.dt == grid.dx == 0.5
    assert grid.time(4) == 2.0

    with pytest.raises(InvalidInputError):
        LatticeGrid(site_count=0, epsilon=0.5)
    with pytest.raises(InvalidInputError):
        LatticeGrid(site_count=10, epsilon=-0.5)
    with pytest.raises(InvalidInputError):
        LatticeGrid.covering(1.0, 1.0, 0.5)
    print("✓ Lattice grid test passed")


def test_step_special_angles():
    """测试 θ ≡ π/2 与 θ ≡ 0 的单步更新"""
    from src.qwgrav import LatticeGrid, ConstantField, step

    rng = np.random.default_rng(2)
    grid = LatticeGrid(site_count=64, epsilon=0.5, origin_offset=32)
    state = _random_state(grid, rng)

    out = step(state, ConstantField(math.pi / 2))
    # ψ^L_{j+1,m} = i ψ^R_{j,m−1}，ψ^R_{j+1,m} = −i ψ^L_{j,m+1}
    np.testing.assert_allclose(out.psi_L[1:], 1j * state.psi_R[:-1], atol=1e-14)
    np.testing.assert_allclose(out.psi_R[:-1], -1j * state.psi_L[1:], atol=1e-14)

    out = step(state, ConstantField(0.0))
    np.testing.assert_array_equal(out.psi_L[:-1], -state.psi_L[1:])
    np.testing.assert_array_equal(out.psi_R[1:], state.psi_R[:-1])
    assert out.psi_L[-1] == 0.0 and out.psi_R[0] == 0.0
    assert out.time_index == 1
    print("✓ Special-angle step test passed")


def test_step_s2_matches_two_steps():
    """测试 100 组随机归一态与随机场上两步复合方程与两次单步一致（含边界）"""
    from src.qwgrav import LatticeGrid, SmoothTestField, make_bh_field, SchwarzschildParams, step, step_s2

    rng = np.random.default_rng(3)
    grid = LatticeGrid(site_count=512, epsilon=0.5, origin_offset=-60)
    for trial in range(100):
        if trial % 2 == 0:
            field = SmoothTestField(*rng.uniform([0.0, 0.0, 0.01, 0.01], [1.5, 0.5, 0.3, 0.3]))
        else:
            field = make_bh_field(SchwarzschildParams(r_g=150.0, lam=float(rng.uniform(0.6, 1.6))))
        j = int(rng.integers(0, 200))
        state = _random_state(grid, rng, time_index=j, normalized=True)
        direct = step_s2(state, field)
        twice = step(step(state, field), field)
        assert direct.time_index == twice.time_index == j + 2
        np.testing.assert_allclose(direct.amplitudes, twice.amplitudes, rtol=0, atol=1e-14)
    print("✓ Two-step composition test passed")


def test_step_back_inverts_step():
    """测试逆更新恢复原状态"""
    from src.qwgrav import LatticeGrid, SmoothTestField, step, step_back
    from src.qwgrav.errors import InvalidInputError

    rng = np.random.default_rng(4)
    grid = LatticeGrid(site_count=50, epsilon=0.25, origin_offset=25)
    field = SmoothTestField(0.5, 0.2, 0.1, 0.1)
    state = _random_state(grid, rng, pad=2, time_index=5)

    restored = step_back(step(state, field), field)
    assert restored.time_index == 5
    np.testing.assert_allclose(restored.amplitudes, state.amplitudes, atol=1e-14)

    with pytest.raises(InvalidInputError):
        step_back(_random_state(grid, rng), field)
    print("✓ Inverse step test passed")


def test_init_gaussian():
    """测试高斯初态的归一化与支撑检查"""
    from src.qwgrav import LatticeGrid, auto_extent, init_gaussian, total_probability
    from src.qwgrav.errors import ConfigurationError, InvalidInputError

    grid = LatticeGrid.covering(*auto_extent(50.5, 2.5, 400, 0.5), 0.5)
    state = init_gaussian(grid, 50.5, 2.5)
    assert abs(total_probability(state) - 1.0) < 1e-15
    # 默认自旋 (1, i)/√2：左右分量各占一半
    assert abs(math.fsum(np.abs(state.psi_L) ** 2) - 0.5) < 1e-14

    # 近似 δ 初态
    narrow = init_gaussian(grid, 50.5, 0.05)
    assert narrow.site_probabilities().max() > 0.999

    with pytest.raises(ConfigurationError):
        init_gaussian(LatticeGrid.covering(40.0, 60.0, 0.5), 50.5, 2.5)
    with pytest.raises(InvalidInputError):
        init_gaussian(grid, 50.5, 0.0)
    with pytest.raises(InvalidInputError):
        init_gaussian(grid, 50.5, 2.5, spin_mix=(0.0, 0.0))
    print("✓ Gaussian initial state test passed")


def test_probability_conservation_bh():
    """测试黑洞场下 600 步概率守恒"""
    from src.qwgrav import (
        LatticeGrid, SchwarzschildParams, auto_extent, evolve, init_gaussian, make_bh_field
    )

    field = make_bh_field(SchwarzschildParams(r_g=150.0, lam=1.0))
    grid = LatticeGrid.covering(*auto_extent(50.5, 2.5, 600, 0.5), 0.5)
    run = evolve(init_gaussian(grid, 50.5, 2.5), field, 600, stride=100)

    assert len(run.probabilities) == 601
    assert np.max(np.abs(run.probabilities - 1.0)) < 1e-12
    assert [s.time_index for s in run.snapshots] == [0, 100, 200, 300, 400, 500, 600]
    assert run.boundary_high_water <= 1e-12
    print(f"Max drift: {np.max(np.abs(run.probabilities - 1.0)):.3e}")
    print("✓ Probability conservation test passed")


def test_evolve_zero_steps_and_stride():
    """测试 0 步演化与快照间隔（最后一步总会记录）"""
    from src.qwgrav import LatticeGrid, ConstantField, auto_extent, evolve, init_gaussian
    from src.qwgrav.errors import InvalidInputError

    grid = LatticeGrid.covering(*auto_extent(0.0, 2.5, 25, 0.5), 0.5)
    state = init_gaussian(grid, 0.0, 2.5)
    field = ConstantField(math.pi / 4)

    run = evolve(state, field, 0)
    assert len(run.snapshots) == 1
    assert run.final is state
    assert len(run.probabilities) == 1
    assert abs(run.probabilities[0] - 1.0) < 1e-15

    run = evolve(state, field, 25, stride=10)
    assert [s.time_index for s in run.snapshots] == [0, 10, 20, 25]

    with pytest.raises(InvalidInputError):
        evolve(state, field, -1)
    with pytest.raises(InvalidInputError):
        evolve(state, field, 5, stride=0)
    print("✓ Zero-step evolution test passed")


def test_evolve_deterministic():
    """测试同一输入两次演化逐位相同"""
    from src.qwgrav import LatticeGrid, SmoothTestField, auto_extent, evolve, init_gaussian

    grid = LatticeGrid.covering(*auto_extent(0.0, 2.5, 80, 0.25), 0.25)
    field = SmoothTestField(0.5, 0.2, 0.1, 0.1)
    first = evolve(init_gaussian(grid, 0.0, 2.5), field, 80, stride=80)
    second = evolve(init_gaussian(grid, 0.0, 2.5), field, 80, stride=80)
    assert np.array_equal(first.final.amplitudes, second.final.amplitudes)
    assert np.array_equal(first.probabilities, second.probabilities)
    print("✓ Determinism test passed")


def test_boundary_guard():
    """测试边界缓冲区概率超限时报错"""
    from src.qwgrav import LatticeGrid, ConstantField, evolve, init_gaussian
    from src.qwgrav.errors import BoundaryGuardError, GuardTrippedError

    grid = LatticeGrid.covering(-10.0, 10.0, 0.5)
    state = init_gaussian(grid, 0.0, 1.0)
    with pytest.raises(BoundaryGuardError):
        evolve(state, ConstantField(0.0), 40)

    # 关闭保护时只记录
    run = evolve(state, ConstantField(0.0), 40, tolerance=None)
    assert len(run.probabilities) == 41
    assert issubclass(BoundaryGuardError, GuardTrippedError)
    print("✓ Boundary guard test passed")


def test_stroboscope():
    """测试频闪观察"""
    from src.qwgrav import LatticeGrid, ConstantField, init_gaussian, step, stroboscope
    from src.qwgrav.errors import InvalidInputError

    grid = LatticeGrid.covering(-30.0, 30.0, 0.5)
    field = ConstantField(math.pi / 4)
    history = [init_gaussian(grid, 0.0, 2.5)]
    for _ in range(9):
        history.append(step(history[-1], field))

    assert [s.time_index for s in stroboscope(history, 2)] == [0, 2, 4, 6, 8]
    assert len(stroboscope(history, 1)) == 10

    with pytest.raises(InvalidInputError):
        stroboscope(history, 0)
    with pytest.raises(InvalidInputError):
        stroboscope(history[::2], 2)
    print("✓ Stroboscope test passed")


def test_total_probability_zero_state():
    """测试零态总概率为 0"""
    from src.qwgrav import LatticeGrid, WalkState, total_probability

    grid = LatticeGrid(site_count=16, epsilon=0.5)
    state = WalkState(grid=grid, time_index=0, amplitudes=np.zeros((16, 2)))
    assert total_probability(state) == 0.0
    assert not state.amplitudes.flags.writeable
    print("✓ Zero-state probability test passed")


def main():
    print("=" * 50)
    print("Running walk tests...")
    print("=" * 50)

    test_lattice_grid()
    test_step_special_angles()
    test_step_s2_matches_two_steps()
    test_step_back_inverts_step()
    test_init_gaussian()
    test_probability_conservation_bh()
    test_evolve_zero_steps_and_stride()
    test_evolve_deterministic()
    test_boundary_guard()
    test_stroboscope()
    test_total_probability_zero_state()

    print("=" * 50)
    print("All walk tests passed!")
    print("=" * 50)


if __name__ == "__main__":
    main()
