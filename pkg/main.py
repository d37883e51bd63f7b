"""
qextremal 命令行入口

退出码: 0 全部断言通过；1 断言失败、容量超限或计算错误；2 用法错误
"""

from __future__ import annotations

import os
import sys
import logging
from pathlib import Path
from typing import Optional, Sequence

# 添加项目根目录到 path
sys.path.insert(0, str(Path(__file__).parent))

from config.settings import load_config
from core.errors import ConfigError, UsageError
from cli.commands import execute, parse_args
from cli.report import write_report

# 配置日志 (报告走标准输出，日志走标准错误)
logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    datefmt="%Y-%m-%d %H:%M:%S",
    stream=sys.stderr,
)
logger = logging.getLogger(__name__)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """主函数"""
    if argv is None:
        argv = sys.argv[1:]

    try:
        cmd = parse_args(argv)
    except UsageError as e:
        print(f"用法错误: {e.message}", file=sys.stderr)
        return e.exit_code

    try:
        config = load_config(Path(cmd.config_file) if cmd.config_file else None)
    except ConfigError as e:
        print(f"配置错误: {e.message}", file=sys.stderr)
        return 2

    logging.getLogger().setLevel(cmd.log_level or config.log_level)

    # QEXTREMAL_CACHE 优先于 --cache
    if cmd.cache_dir and not os.environ.get("QEXTREMAL_CACHE"):
        config.cache.directory = cmd.cache_dir

    exit_code, report = execute(cmd, config)
    write_report(report, cmd.format or config.report.format, cmd.output, config.report.significant_digits)
    return exit_code


if __name__ == "__main__":
    sys.exit(main())
