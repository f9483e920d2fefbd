# -*- coding: utf-8 -*-

import os
from typing import Iterable, List, Union

from omegaconf import OmegaConf, DictConfig, ListConfig


def get_config_from_file(config_file: str) -> Union[DictConfig, ListConfig]:
    config = OmegaConf.load(config_file)

    if 'base_config' in config.keys():
        base_path = config['base_config']
        if not str(base_path).endswith(".yaml"):
            raise ValueError(f"{config_file}: `base_config` must point to a `.yaml` file.")
        if not os.path.isabs(base_path):
            base_path = os.path.join(os.path.dirname(os.path.abspath(config_file)), base_path)
        base_config = get_config_from_file(base_path)

        config = OmegaConf.create({key: value for key, value in config.items() if key != "base_config"})

        return OmegaConf.merge(base_config, config)

    return config


def parse_dotlist_lines(lines: Iterable[str]) -> DictConfig:
    """
    解析扁平 key=value 文本（忽略空行与 # 注释）

    Args:
        lines: 文本行

    Returns:
        OmegaConf 配置
    """
    dotlist: List[str] = []
    for raw in lines:
        line = raw.strip()
        if not line or line.startswith('#'):
            continue
        if '=' not in line:
            raise ValueError(f"Expected `key=value`, got: {line!r}")
        key, value = line.split('=', 1)
        dotlist.append(f"{key.strip()}={value.strip()}")
    return OmegaConf.from_dotlist(dotlist)


def get_config_from_keyvalue_file(path: str) -> DictConfig:
    with open(path, 'r', encoding='utf-8') as f:
        return parse_dotlist_lines(f.readlines())
