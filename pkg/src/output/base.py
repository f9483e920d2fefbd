# -*- coding: utf-8 -*-
"""
输出写入器基类与文件头格式
"""

import json
import math
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Union

FLOAT_FORMAT = "%.17g"


def format_value(value: Any) -> str:
    """文件头中的单个值：浮点 17 位有效数字，列表用逗号连接，含空白的字符串加引号"""
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "null"
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return FLOAT_FORMAT % value
    if isinstance(value, (list, tuple)):
        return "[" + ",".join(format_value(v) for v in value) + "]"
    text = str(value)
    if any(ch.isspace() for ch in text) or text == "":
        return json.dumps(text, ensure_ascii=False)
    return text


def format_header(items: Mapping[str, Any]) -> str:
    """单行文件头 "# key=value ..."，键按字母序"""
    return "# " + " ".join(f"{key}={format_value(items[key])}" for key in sorted(items))


class BaseWriter(ABC):
    """输出写入器基类"""

    @abstractmethod
    def write(self, data: Any, path: Union[str, Path], header: Optional[Dict[str, Any]] = None) -> Path:
        """
        写入文件

        Args:
            data: 要写入的数据
            path: 输出路径
            header: 文件头键值

        Returns:
            输出文件路径
        """
        pass

    def __call__(self, data: Any, path: Union[str, Path], header: Optional[Dict[str, Any]] = None) -> Path:
        return self.write(data, path, header)

    @staticmethod
    def _prepare(path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        return path
