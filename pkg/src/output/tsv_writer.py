# -*- coding: utf-8 -*-
"""
TSV 写入器

第一行 "# key=value ..."，第二行列名，其后为数据行；浮点数 %.17g，可逐位复现。
"""

from pathlib import Path
from typing import Any, Dict, Optional, Union

import pandas as pd

from .base import FLOAT_FORMAT, BaseWriter, format_header


class TSVWriter(BaseWriter):
    """制表符分隔表格写入器"""

    def write(
        self,
        data: pd.DataFrame,
        path: Union[str, Path],
        header: Optional[Dict[str, Any]] = None
    ) -> Path:
        """
        写入 DataFrame

        Args:
            data: 表格
            path: 输出路径
            header: 文件头（已解析配置与运行元数据）

        Returns:
            输出文件路径
        """
        path = self._prepare(path)
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(format_header(header or {}) + "\n")
            data.to_csv(
                f,
                sep="\t",
                index=False,
                float_format=FLOAT_FORMAT,
                na_rep="nan",
                lineterminator="\n",
            )
        return path


def read_tsv(path: Union[str, Path]) -> pd.DataFrame:
    """读回 TSV（跳过文件头），浮点逐位还原"""
    return pd.read_csv(path, sep="\t", skiprows=1, float_precision="round_trip")


def read_header(path: Union[str, Path]) -> Dict[str, str]:
    """解析第一行的 key=value"""
    with open(path, "r", encoding="utf-8") as f:
        first = f.readline().rstrip("\n")
    if not first.startswith("# "):
        return {}
    items = {}
    for token in first[2:].split(" "):
        if "=" in token:
            key, value = token.split("=", 1)
            items[key] = value
    return items
