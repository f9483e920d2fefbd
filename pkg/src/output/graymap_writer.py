# -*- coding: utf-8 -*-
"""
16 位二进制 PGM（P5）热图写入器

行对应时间，列对应 X；数值按 min–max 线性缩放到 0..65535，缩放范围写入注释行。
"""

from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np

from .base import FLOAT_FORMAT, BaseWriter

MAXVAL = 65535


class GraymapWriter(BaseWriter):
    """portable graymap 热图"""

    def write(
        self,
        data: np.ndarray,
        path: Union[str, Path],
        header: Optional[Dict[str, Any]] = None
    ) -> Path:
        """
        写入二维数组

        Args:
            data: 形状 (rows, cols)
            path: 输出路径
            header: 未使用，缩放信息固定写入注释

        Returns:
            输出文件路径
        """
        values = np.asarray(data, dtype=np.float64)
        if values.ndim != 2 or values.size == 0:
            raise ValueError(f"Graymap needs a nonempty 2-D array, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("Graymap values must be finite")

        lo, hi = float(values.min()), float(values.max())
        if hi > lo:
            scaled = np.rint((values - lo) / (hi - lo) * MAXVAL)
        else:
            scaled = np.zeros_like(values)
        pixels = np.clip(scaled, 0, MAXVAL).astype(">u2")

        rows, cols = values.shape
        head = (
            "P5\n"
            f"# min={FLOAT_FORMAT % lo} max={FLOAT_FORMAT % hi} rows=time cols=X\n"
            f"{cols} {rows}\n"
            f"{MAXVAL}\n"
        ).encode("ascii")

        path = self._prepare(path)
        with open(path, "wb") as f:
            f.write(head)
            f.write(pixels.tobytes(order="C"))
        return path
