# -*- coding: utf-8 -*-
"""
密度快照写入器
"""

from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import pandas as pd

from src.qwgrav.analysis import DensityField

from .base import BaseWriter
from .tsv_writer import TSVWriter

SNAPSHOT_DIR = "snapshots"
MANIFEST_NAME = "snapshots.tsv"


def snapshot_name(time_index: int) -> str:
    return f"density_j{time_index:06d}.tsv"


class DensityWriter(BaseWriter):
    """每个快照一个 TSV（X, n_raw, n_smoothed），外加清单文件"""

    def __init__(self, tsv_writer: Optional[TSVWriter] = None):
        self.tsv_writer = tsv_writer or TSVWriter()
        self.written: List[Path] = []

    def write(
        self,
        data: DensityField,
        path: Union[str, Path],
        header: Optional[Dict[str, Any]] = None
    ) -> Path:
        """
        写入全部快照

        Args:
            data: 密度场
            path: 输出目录
            header: 文件头

        Returns:
            清单文件路径
        """
        directory = Path(path)
        header = dict(header or {})
        self.written = []
        X = data.positions
        # 格点 m 上的平滑值取 (n_m + n_{m+1})/2
        smoothed = data.smoothed[:, 1:]

        rows = []
        for k, j in enumerate(data.time_indices):
            name = snapshot_name(int(j))
            frame = pd.DataFrame({"X": X, "n_raw": data.raw[k], "n_smoothed": smoothed[k]})
            snapshot_header = dict(header, time_index=int(j), T=float(data.times[k]))
            self.written.append(self.tsv_writer.write(frame, directory / SNAPSHOT_DIR / name, snapshot_header))
            rows.append({
                "time_index": int(j),
                "T": float(data.times[k]),
                "file": f"{SNAPSHOT_DIR}/{name}",
                "total_probability": float(data.totals[k]),
            })

        manifest = self.tsv_writer.write(pd.DataFrame(rows), directory / MANIFEST_NAME, header)
        self.written.append(manifest)
        return manifest
