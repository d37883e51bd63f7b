"""
Q-index CSV 缓存测试
"""

import pandas as pd

from core.canonical import canonical_form
from families.constructors import complete, subdivided_clique
from storage.qindex_cache import QIndexCache


def test_creates_file_with_header(tmp_path):
    path = tmp_path / "nested" / "cache.csv"
    QIndexCache(path, "test")
    assert path.exists()
    assert list(pd.read_csv(path).columns) == QIndexCache.COLUMNS


def test_put_and_get(cache):
    form = canonical_form(complete(4))
    assert cache.get(form, 1e-10) is None
    cache.put(form, 6.0, 1e-10)
    assert cache.get(form, 1e-10) == 6.0
    assert cache.hits == 1 and cache.misses == 1


def test_looser_entry_is_not_a_hit(cache):
    form = canonical_form(complete(4))
    cache.put(form, 6.0, 1e-6)
    assert cache.get(form, 1e-10) is None
    assert cache.get(form, 1e-5) == 6.0


def test_persists_across_instances(tmp_path):
    path = tmp_path / "cache.csv"
    form = canonical_form(subdivided_clique(6, 4))
    q1 = 5.612345678901234
    QIndexCache(path, "test").put(form, q1, 1e-10)

    reopened = QIndexCache(path, "test")
    assert len(reopened) == 1
    assert reopened.get(form, 1e-10) == q1


def test_skips_write_when_qualifying_row_exists(tmp_path):
    path = tmp_path / "cache.csv"
    form = canonical_form(complete(3))
    first = QIndexCache(path, "test")
    first.put(form, 4.0000001, 1e-6)
    first.put(form, 4.0, 1e-12)
    # 1e-12 的记录已满足 1e-8，不再追加
    first.put(form, 4.1, 1e-8)

    rows = pd.read_csv(path, dtype={"key": str})
    assert len(rows) == 2


def test_most_recent_qualifying_row_wins(tmp_path):
    path = tmp_path / "cache.csv"
    key = canonical_form(complete(3)).hex()
    path.write_text(
        "key,q1,tol,tool_version\n"
        f"{key},4.5,1e-12,old\n"
        f"{key},4.25,1e-10,old\n"
        f"{key},4.0,1e-6,new\n"
    )
    cache = QIndexCache(path, "test")
    form = canonical_form(complete(3))
    assert cache.get(form, 1e-6) == 4.0
    assert cache.get(form, 1e-10) == 4.25
    assert cache.get(form, 1e-12) == 4.5
    assert cache.get(form, 1e-13) is None
    assert cache.entries().iloc[0]["q1"] == 4.0


class TestMalformedRows:
    """损坏的行被丢弃并告警，其余记录照常使用"""

    def _write(self, path, *lines, header="key,q1,tol,tool_version"):
        path.write_text("\n".join([header, *lines]) + "\n")

    def test_bad_numbers_dropped(self, tmp_path, caplog):
        path = tmp_path / "cache.csv"
        good = canonical_form(complete(3)).hex()
        other = canonical_form(complete(4)).hex()
        self._write(path, f"{good},4.0,1e-10,v", f"{other},abc,1e-10,v", f"{other},6.0,-1,v", f"{other},6.0,,v")
        with caplog.at_level("WARNING", logger="storage.qindex_cache"):
            cache = QIndexCache(path, "test")
        assert len(cache) == 1
        assert cache.get(canonical_form(complete(3)), 1e-10) == 4.0
        assert sum("格式错误" in r.getMessage() for r in caplog.records) == 3

    def test_bad_key_dropped(self, tmp_path, caplog):
        path = tmp_path / "cache.csv"
        self._write(path, "zz,4.0,1e-10,v", ",4.0,1e-10,v")
        with caplog.at_level("WARNING", logger="storage.qindex_cache"):
            cache = QIndexCache(path, "test")
        assert len(cache) == 0
        assert any("格式错误" in r.getMessage() for r in caplog.records)

    def test_extra_fields_dropped(self, tmp_path, caplog):
        path = tmp_path / "cache.csv"
        key = canonical_form(complete(3)).hex()
        self._write(path, f"{key},4.0,1e-10,v", f"{key},9.0,1e-10,v,extra")
        with caplog.at_level("WARNING", logger="storage.qindex_cache"):
            cache = QIndexCache(path, "test")
        assert cache.get(canonical_form(complete(3)), 1e-10) == 4.0
        assert any("字段数" in r.getMessage() for r in caplog.records)

    def test_short_row_dropped(self, tmp_path):
        path = tmp_path / "cache.csv"
        key = canonical_form(complete(3)).hex()
        self._write(path, f"{key},4.0")
        assert len(QIndexCache(path, "test")) == 0

    def test_corrupted_header(self, tmp_path):
        path = tmp_path / "cache.csv"
        key = canonical_form(complete(3)).hex()
        self._write(path, f"{key},4.0,1e-10,v", header="ke#y,q1")
        cache = QIndexCache(path, "test")
        assert cache.get(canonical_form(complete(3)), 1e-10) == 4.0

    def test_empty_file_gets_header(self, tmp_path):
        path = tmp_path / "cache.csv"
        path.write_text("")
        cache = QIndexCache(path, "test")
        cache.put(canonical_form(complete(3)), 4.0, 1e-10)
        assert len(QIndexCache(path, "test")) == 1

    def test_appends_after_bad_rows(self, tmp_path):
        path = tmp_path / "cache.csv"
        self._write(path, "garbage")
        form = canonical_form(complete(4))
        QIndexCache(path, "test").put(form, 6.0, 1e-10)
        assert QIndexCache(path, "test").get(form, 1e-10) == 6.0


def test_entries_frame(cache):
    cache.put(canonical_form(complete(3)), 4.0, 1e-10)
    df = cache.entries()
    assert list(df.columns) == ["key", "q1", "tol"]
    assert df.iloc[0]["key"] == canonical_form(complete(3)).hex()
