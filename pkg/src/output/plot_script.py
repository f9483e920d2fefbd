# -*- coding: utf-8 -*-
"""
gnuplot 脚本桩：叠加面板数据中的密度与各条比较曲线
"""

from pathlib import Path
from typing import Any, Dict, Optional, Union

from .base import BaseWriter, format_header

CURVE_SERIES = (
    ("geodesic_plus", "null geodesic s=+1", "lc rgb 'black' lw 2"),
    ("geodesic_minus", "null geodesic s=-1", "lc rgb 'black' lw 2"),
    ("horizon", "horizon", "lc rgb 'black' dt 2"),
    ("singularity", "singularity", "lc rgb 'black' dt 4"),
    ("domain_boundary", "domain boundary", "lc rgb 'red' lw 2"),
)


class PlotScriptWriter(BaseWriter):
    """写 plot.gp"""

    def write(
        self,
        data: str,
        path: Union[str, Path],
        header: Optional[Dict[str, Any]] = None
    ) -> Path:
        """
        Args:
            data: 面板数据文件名（相对脚本所在目录）
            path: 输出路径
            header: 文件头，作为注释写入
        """
        dataset = data
        lines = [
            format_header(header or {}),
            "set datafile separator '\\t'",
            "set xlabel 'X'",
            "set ylabel 'T'",
            "set key outside",
            "set palette grey negative",
            f"panel_data = '{dataset}'",
            "# 密度: series == density，第 2-4 列为 T, X, value",
            "plot \\",
            "  panel_data skip 2 using (strcol(1) eq 'density' ? $3 : 1/0):2:4 with points pt 5 ps 0.3 "
            "palette notitle, \\",
        ]
        for i, (series, title, style) in enumerate(CURVE_SERIES):
            tail = ", \\" if i < len(CURVE_SERIES) - 1 else ""
            lines.append(
                f"  panel_data skip 2 using (strcol(1) eq '{series}' ? $3 : 1/0):2 "
                f"with lines {style} title '{title}'{tail}"
            )
        path = self._prepare(path)
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write("\n".join(lines) + "\n")
        return path
