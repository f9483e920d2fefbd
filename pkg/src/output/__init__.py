# -*- coding: utf-8 -*-
"""
输出模块
TSV 表格、密度快照、PGM 热图与 gnuplot 脚本桩
"""

from .base import BaseWriter, format_header, format_value
from .tsv_writer import TSVWriter, read_header, read_tsv
from .density_writer import DensityWriter, snapshot_name
from .graymap_writer import GraymapWriter
from .plot_script import PlotScriptWriter

__all__ = [
    'BaseWriter',
    'format_header',
    'format_value',
    'TSVWriter',
    'read_header',
    'read_tsv',
    'DensityWriter',
    'snapshot_name',
    'GraymapWriter',
    'PlotScriptWriter',
]
