#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
硬币矩阵与角度场测试
"""

import math
import os
import sys
import tempfile

sys.path.insert(0, '.')

import numpy as np
import pandas as pd
import pytest


def test_coin_unitary_and_involution():
    """测试 B(θ) 幺正、行列式 −1 且 B² = I"""
    from src.qwgrav import build_coin

    rng = np.random.default_rng(0)
    for theta in np.concatenate([[0.0, math.pi / 4, math.pi / 2, math.pi], rng.uniform(-10, 10, 200)]):
        coin = build_coin(theta)
        assert coin.is_unitary()
        assert abs(coin.determinant() + 1.0) < 1e-15
        assert (coin @ coin).max_deviation_from_identity() < 1e-15

    print("✓ Coin unitarity test passed")


def test_coin_identity_defect():
    """测试 B(θ) 离单位阵至少为 1，单步行走不存在连续极限"""
    from src.qwgrav import build_coin, coin_identity_defect

    for theta in np.linspace(-math.pi, math.pi, 101):
        assert coin_identity_defect(theta) >= 1.0 - 1e-15

    coin = build_coin(0.0)
    np.testing.assert_allclose(coin.as_array(), np.diag([-1.0, 1.0]), atol=0.0)
    print("✓ Coin identity defect test passed")


def test_coin_rejects_nonfinite():
    """测试非有限角度"""
    from src.qwgrav import build_coin, ConstantField, SmoothTestField
    from src.qwgrav.errors import InvalidInputError

    for bad in (math.nan, math.inf, -math.inf):
        with pytest.raises(InvalidInputError):
            build_coin(bad)
    with pytest.raises(InvalidInputError):
        ConstantField(math.nan)
    with pytest.raises(InvalidInputError):
        SmoothTestField(0.5, math.inf, 0.1, 0.1)
    print("✓ Non-finite angle test passed")


def test_constant_field():
    """测试常数场的取值、导数与广播"""
    from src.qwgrav import ConstantField, eval_angle

    field = ConstantField(math.pi / 3)
    value = eval_angle(field, 1.0, 2.0)
    assert isinstance(value, float)
    assert value == math.pi / 3

    X = np.linspace(-5, 5, 11)
    values = eval_angle(field, 0.5, X)
    assert values.shape == X.shape
    assert np.all(values == math.pi / 3)
    assert np.all(field.angle_x(0.5, X) == 0.0)
    assert np.all(field.angle_t(0.5, X) == 0.0)
    assert field.is_smooth and field.is_static
    print("✓ Constant field test passed")


def test_smooth_field_derivatives():
    """测试光滑测试场的解析导数与中心差分一致"""
    from src.qwgrav import SmoothTestField

    field = SmoothTestField(theta0=0.5, amplitude=0.2, wavenumber=0.1, omega=0.1)
    rng = np.random.default_rng(1)
    T = rng.uniform(0, 50, 50)
    X = rng.uniform(-40, 40, 50)
    h = 1e-5

    fd_x = (field.angle(T, X + h) - field.angle(T, X - h)) / (2 * h)
    fd_t = (field.angle(T + h, X) - field.angle(T - h, X)) / (2 * h)
    np.testing.assert_allclose(field.angle_x(T, X), fd_x, atol=1e-9)
    np.testing.assert_allclose(field.angle_t(T, X), fd_t, atol=1e-9)
    assert not field.is_static
    assert SmoothTestField(0.5, 0.2, 0.1, 0.0).is_static
    print("✓ Smooth test field derivative test passed")


def test_tabulated_field():
    """测试表格场的加载、双线性插值与定义域"""
    from src.qwgrav import TabulatedField, eval_angle
    from src.qwgrav.errors import DomainError

    t_grid = np.array([0.0, 1.0, 2.0])
    x_grid = np.array([-1.0, 0.0, 1.0, 2.0])
    rows = [{"T": t, "X": x, "theta": 0.1 * t + 0.2 * x} for t in t_grid for x in x_grid]

    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "field.tsv")
        with open(path, "w") as f:
            f.write("# tabulated coin angle\n")
            pd.DataFrame(rows).to_csv(f, sep="\t", index=False)

        field = TabulatedField.from_tsv(path)

    assert not field.is_smooth
    assert abs(eval_angle(field, 1.0, 0.0) - 0.1) < 1e-15
    # 双线性插值对线性函数是精确的
    assert abs(eval_angle(field, 0.5, 0.5) - (0.05 + 0.1)) < 1e-14
    assert abs(float(field.angle_x(1.0, 0.5)) - 0.2) < 1e-9
    assert abs(float(field.angle_t(0.5, 0.5)) - 0.1) < 1e-9

    with pytest.raises(DomainError):
        eval_angle(field, 0.5, 3.0)
    with pytest.raises(DomainError):
        eval_angle(field, np.array([0.5, 2.5]), 0.0)
    print("✓ Tabulated field test passed")


def test_tabulated_field_incomplete_grid():
    """测试表格缺点时报错"""
    from src.qwgrav import TabulatedField
    from src.qwgrav.errors import InvalidInputError

    frame = pd.DataFrame({"T": [0.0, 0.0, 1.0], "X": [0.0, 1.0, 0.0], "theta": [0.1, 0.2, 0.3]})
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "field.tsv")
        frame.to_csv(path, sep="\t", index=False)
        with pytest.raises(InvalidInputError):
            TabulatedField.from_tsv(path)

        frame.rename(columns={"theta": "angle"}).to_csv(path, sep="\t", index=False)
        with pytest.raises(InvalidInputError):
            TabulatedField.from_tsv(path)
    print("✓ Incomplete tabulated grid test passed")


def main():
    print("=" * 50)
    print("Running coin tests...")
    print("=" * 50)

    test_coin_unitary_and_involution()
    test_coin_identity_defect()
    test_coin_rejects_nonfinite()
    test_constant_field()
    test_smooth_field_derivatives()
    test_tabulated_field()
    test_tabulated_field_incomplete_grid()

    print("=" * 50)
    print("All coin tests passed!")
    print("=" * 50)


if __name__ == "__main__":
    main()
