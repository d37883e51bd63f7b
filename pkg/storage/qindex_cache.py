"""
Q-index 结果缓存 (CSV)

以规范形式的十六进制为键，一行一条记录，只追加不改写。
同一键有多条记录时，以满足容忍度要求的最近一条为准。
"""

import logging
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import pandas as pd

from core.canonical import CanonicalForm

logger = logging.getLogger(__name__)


def _valid_key(key: str) -> bool:
    try:
        bytes.fromhex(key)
    except ValueError:
        return False
    return bool(key)


class QIndexCache:
    """CSV 缓存管理"""

    # CSV 列定义
    COLUMNS = ["key", "q1", "tol", "tool_version"]

    def __init__(self, path: Path, tool_version: str):
        """
        初始化缓存

        Args:
            path: CSV 文件路径
            tool_version: 写入记录时附带的版本号
        """
        self.path = Path(path)
        self.tool_version = tool_version
        self.hits = 0
        self.misses = 0
        # 每个键按文件顺序保存 (q1, tol)
        self._entries: Dict[str, List[Tuple[float, float]]] = {}

        # 确保目录存在
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._init_csv_file()
        self._load()

    def _init_csv_file(self):
        """初始化 CSV 文件（不存在或为空时写入表头）"""
        if not self.path.exists() or self.path.stat().st_size == 0:
            pd.DataFrame(columns=self.COLUMNS).to_csv(self.path, index=False)
            logger.info(f"创建缓存文件: {self.path}")

    def _skip_bad_line(self, fields: List[str]) -> None:
        logger.warning(f"缓存行字段数不对，已忽略: {','.join(fields)}")
        return None

    def _read(self) -> pd.DataFrame:
        # 第一行总是表头，内容不做校验
        try:
            return pd.read_csv(
                self.path,
                names=self.COLUMNS,
                header=None,
                skiprows=1,
                dtype=str,
                keep_default_na=False,
                engine="python",
                on_bad_lines=self._skip_bad_line,
            )
        except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
            logger.warning(f"缓存文件无法解析，本次不使用已有记录: {self.path} ({e})")
            return pd.DataFrame(columns=self.COLUMNS)

    def _load(self):
        df = self._read()
        if df.empty:
            return
        keys = df["key"].fillna("").astype(str).str.strip()
        q1 = pd.to_numeric(df["q1"], errors="coerce")
        tol = pd.to_numeric(df["tol"], errors="coerce")
        valid = q1.between(0, float("inf"), inclusive="left") & tol.between(0, float("inf"), inclusive="neither") & keys.map(_valid_key)

        for i in df.index[~valid]:
            logger.warning(f"缓存记录 #{i + 1} 格式错误，已忽略: {df.loc[i].tolist()}")

        # float() 对 repr 文本往返精确
        for key, q, t in zip(keys[valid], df["q1"][valid], df["tol"][valid]):
            self._entries.setdefault(key, []).append((float(q), float(t)))
        logger.debug(f"缓存已加载: {len(self._entries)} 个键 ({self.path})")

    def __len__(self) -> int:
        return len(self._entries)

    def _lookup(self, key: str, tol: float) -> Optional[float]:
        for q1, stored in reversed(self._entries.get(key, ())):
            if stored <= tol:
                return q1
        return None

    def get(self, form: CanonicalForm, tol: float) -> Optional[float]:
        """
        查询缓存

        只有存储的 tol 不大于请求的 tol 时才命中，多条命中时取最近一条
        """
        q1 = self._lookup(form.hex(), tol)
        if q1 is None:
            self.misses += 1
        else:
            self.hits += 1
        return q1

    def put(self, form: CanonicalForm, q1: float, tol: float):
        """追加一条记录 (已有满足 tol 的记录时跳过)"""
        key = form.hex()
        if self._lookup(key, tol) is not None:
            return
        self._entries.setdefault(key, []).append((q1, tol))
        row = {"key": key, "q1": repr(q1), "tol": tol, "tool_version": self.tool_version}
        pd.DataFrame([row]).to_csv(self.path, mode="a", header=False, index=False)

    def entries(self) -> pd.DataFrame:
        """每个键最近一条记录 (selftest 抽查用)"""
        return pd.DataFrame(
            [(k, rows[-1][0], rows[-1][1]) for k, rows in self._entries.items()],
            columns=["key", "q1", "tol"],
        )
