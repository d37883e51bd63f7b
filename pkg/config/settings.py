"""
配置文件

支持 JSON 配置 + 环境变量覆盖 (.env 文件同样生效)
"""

import os
import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional
from dataclasses import dataclass, field, asdict

from dotenv import load_dotenv

from core.errors import ConfigError

logger = logging.getLogger(__name__)

TOOL_VERSION = "0.3.0"


def get_env(key: str, default: Any = None, cast_type: type = str) -> Any:
    """从环境变量获取配置，支持类型转换"""
    value = os.environ.get(key)
    if value is None:
        return default
    if cast_type == bool:
        return value.lower() in ('true', '1', 'yes', 'on')
    if cast_type == int:
        return int(value)
    if cast_type == float:
        return float(value)
    return value


# 配置文件路径
CONFIG_DIR = Path(__file__).parent
DATA_DIR = Path(__file__).parent.parent / "data"


def get_config_file() -> Path:
    """
    获取配置文件路径

    优先级:
    1. 环境变量 QEXTREMAL_CONFIG
    2. data/qextremal.json
    3. config/qextremal.json
    """
    env_path = os.environ.get("QEXTREMAL_CONFIG")
    if env_path:
        return Path(env_path)

    data_config = DATA_DIR / "qextremal.json"
    if data_config.exists():
        return data_config

    return CONFIG_DIR / "qextremal.json"


@dataclass
class SpectralSettings:
    """特征值计算配置"""
    tol: float = 1e-10                  # 残差容忍度 (无穷范数)
    max_iterations: int = 1_000_000     # 幂迭代上限
    strict_margin: float = 1e-9         # 严格不等式的判定余量
    hypothesis_tol: float = 1e-12       # x_u >= x_v 的判定容忍度
    accept_tol: float = 1e-8            # 与闭式解/三次方程根的比对容忍度


@dataclass
class SearchSettings:
    """穷举搜索配置"""
    gap: float = 1e-6                   # 唯一性判定余量
    workers: int = 1                    # 并行进程数
    max_order: int = 10                 # 枚举阶数上限
    boundary_scan_cap: int = 24         # 连通子集扫描的顶点上限
    oracle_cap: int = 10                # 分支集预言机的顶点上限
    include_disconnected: bool = True   # 报告中附带最佳不连通对手


@dataclass
class CacheSettings:
    """结果缓存配置"""
    enabled: bool = True
    directory: str = str(DATA_DIR)
    file_name: str = "qindex_cache.csv"

    @property
    def path(self) -> Path:
        return Path(self.directory) / self.file_name


@dataclass
class ReportSettings:
    """报告配置"""
    significant_digits: int = 12
    format: str = "json"


@dataclass
class AppConfig:
    """应用总配置"""
    spectral: SpectralSettings = field(default_factory=SpectralSettings)
    search: SearchSettings = field(default_factory=SearchSettings)
    cache: CacheSettings = field(default_factory=CacheSettings)
    report: ReportSettings = field(default_factory=ReportSettings)
    log_level: str = "INFO"
    tool_version: str = TOOL_VERSION

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _section(cls, data: Dict[str, Any], name: str):
    """用 JSON 中的一节构造 dataclass，未知键报错"""
    values = data.get(name, {})
    try:
        return cls(**values)
    except TypeError as e:
        raise ConfigError(f"配置节 [{name}] 非法: {e}")


def load_config(config_file: Optional[Path] = None) -> AppConfig:
    """
    加载配置文件

    文件不存在时使用默认值；环境变量覆盖文件中的值

    Args:
        config_file: 配置文件路径

    Returns:
        AppConfig: 应用配置
    """
    load_dotenv()

    if config_file is None:
        config_file = get_config_file()

    data: Dict[str, Any] = {}
    if config_file.exists():
        try:
            with open(config_file, "r", encoding="utf-8") as f:
                data = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigError(f"配置文件格式错误: {config_file}: {e}")
        logger.info(f"配置文件: {config_file}")
    else:
        logger.debug(f"配置文件不存在，使用默认配置: {config_file}")

    spectral = _section(SpectralSettings, data, "spectral")
    search = _section(SearchSettings, data, "search")
    cache = _section(CacheSettings, data, "cache")
    report = _section(ReportSettings, data, "report")

    # 环境变量覆盖
    spectral.tol = get_env("QEXTREMAL_TOL", spectral.tol, float)
    search.gap = get_env("QEXTREMAL_GAP", search.gap, float)
    search.workers = get_env("QEXTREMAL_WORKERS", search.workers, int)
    cache.directory = get_env("QEXTREMAL_CACHE", cache.directory)
    cache.enabled = get_env("QEXTREMAL_CACHE_ENABLED", cache.enabled, bool)
    log_level = get_env("LOG_LEVEL", data.get("log_level", "INFO"))

    if os.environ.get("QEXTREMAL_CACHE"):
        logger.info(f"缓存目录由 QEXTREMAL_CACHE 指定: {cache.directory}")

    return AppConfig(
        spectral=spectral,
        search=search,
        cache=cache,
        report=report,
        log_level=log_level,
    )


# 全局配置实例 (延迟加载)
_config: Optional[AppConfig] = None


def get_config() -> AppConfig:
    """获取全局配置实例"""
    global _config
    if _config is None:
        _config = load_config()
    return _config


def reset_config():
    """清除全局配置 (测试用)"""
    global _config
    _config = None
