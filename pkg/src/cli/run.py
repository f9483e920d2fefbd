#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
命令行入口

使用方式:
    # 默认配置下的黑洞行走
    python -m src.cli.run walk

    # 复现黑洞面板
    python -m src.cli.run figure1 --panel all --workers 4

    # 连续极限收敛研究
    python -m src.cli.run converge --profile configs/convergence.yaml

    # 零测地线
    python -m src.cli.run geodesic --geodesic_starts "[[0,100]]" --geodesic_signs "[1]"

    # 标量频闪演示
    python -m src.cli.run strobe-demo --strobe_sigma -1
"""

import argparse
import os
import sys
import typing
from typing import List, Optional, Sequence

# 添加项目根目录到路径
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))))

from src.cli.error_handler import run_with_error_handling
from src.qwgrav.errors import ConfigurationError
from src.qwgrav.utils import setup_logging
from src.service import Command, Panel, RunConfig, SimulationService, resolve_config

OVERRIDE_PREFIX = "override_"

COMMAND_HELP = {
    Command.WALK: "运行行走，输出 π_j 序列与密度快照",
    Command.FIGURE1: "复现黑洞面板（密度与零测地线）",
    Command.CONVERGE: "ε -> 0 收敛研究",
    Command.GEODESIC: "积分零测地线",
    Command.STROBE_DEMO: "标量序列的频闪演示",
}


def _is_list_field(name: str) -> bool:
    return typing.get_origin(RunConfig.model_fields[name].annotation) is list


def _add_field_flags(parser: argparse.ArgumentParser):
    group = parser.add_argument_group("RunConfig 字段")
    for name, info in RunConfig.model_fields.items():
        group.add_argument(
            f"--{name}",
            dest=f"{OVERRIDE_PREFIX}{name}",
            type=str,
            default=None,
            metavar="VALUE",
            help=info.description,
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="python -m src.cli.run",
        description="Quantum walks in curved space-time",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
示例:
  python -m src.cli.run walk --epsilon 0.25 --steps 200
  python -m src.cli.run figure1 --panel c
  python -m src.cli.run converge --profile configs/convergence.yaml --workers 3

退出码: 0 成功, 2 配置错误, 3 运行期保护触发
        """
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in Command:
        sub = subparsers.add_parser(command.value, help=COMMAND_HELP[command])
        sub.add_argument("--profile", type=str, default=None, help="YAML 配置（可用 base_config 继承）")
        sub.add_argument("--config", type=str, default=None, help="扁平 key=value 配置文件")
        if command is Command.FIGURE1:
            sub.add_argument(
                "--panel",
                choices=[p.value for p in Panel] + ["all"],
                default="all",
                help="面板 (默认: all)"
            )
        _add_field_flags(sub)
    return parser


def collect_overrides(args: argparse.Namespace) -> List[str]:
    """命令行字段参数 -> dotlist；列表字段允许省略方括号"""
    overrides = []
    for name in RunConfig.model_fields:
        value = getattr(args, f"{OVERRIDE_PREFIX}{name}", None)
        if value is None:
            continue
        if _is_list_field(name) and not value.strip().startswith("["):
            value = f"[{value}]"
        overrides.append(f"{name}={value}")
    return overrides


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    command = Command(args.command)

    def execute():
        resolved = resolve_config(args.profile, args.config, collect_overrides(args))
        try:
            setup_logging(**resolved.logging_section())
        except (TypeError, ValueError) as e:
            raise ConfigurationError(f"Invalid logging section: {e}") from None

        panels = None
        if command is Command.FIGURE1:
            panels = list(Panel) if args.panel == "all" else [Panel(args.panel)]

        service = SimulationService(resolved)
        for artifacts in service.run(command, panels):
            label = command.value if artifacts.panel is None else f"{command.value} {artifacts.panel.value}"
            print(f"✓ {label}: {len(artifacts.files)} files in {artifacts.output_dir} "
                  f"({artifacts.processing_time:.2f}s)")

    return run_with_error_handling(execute)


if __name__ == "__main__":
    sys.exit(main())
