"""
测试公共设置
"""

import sys
from pathlib import Path

import pytest

# 添加项目根目录到 path
sys.path.insert(0, str(Path(__file__).parent.parent))

from config.settings import AppConfig, reset_config
from storage.qindex_cache import QIndexCache


@pytest.fixture(autouse=True)
def _isolated_env(monkeypatch):
    """屏蔽外部环境变量，避免影响配置加载"""
    for key in (
        "QEXTREMAL_CONFIG",
        "QEXTREMAL_CACHE",
        "QEXTREMAL_CACHE_ENABLED",
        "QEXTREMAL_TOL",
        "QEXTREMAL_GAP",
        "QEXTREMAL_WORKERS",
        "LOG_LEVEL",
    ):
        monkeypatch.delenv(key, raising=False)
    reset_config()
    yield
    reset_config()


@pytest.fixture
def app_config(tmp_path):
    """默认配置，缓存放在临时目录"""
    config = AppConfig()
    config.cache.directory = str(tmp_path / "cache")
    return config


@pytest.fixture
def cache(tmp_path):
    return QIndexCache(tmp_path / "cache" / "qindex_cache.csv", "test")
