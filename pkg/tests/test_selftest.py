"""
验收套件测试 (完整套件耗时，标记为 slow)
"""

import pytest

from cli.selftest import _cache_spot_check, _formula_checks, run_selftest
from core.canonical import canonical_form
from families.constructors import complete
from search.audit import AuditRecord
from services.spectral import q_index


@pytest.mark.slow
def test_quick_selftest_passes(app_config, cache):
    record = run_selftest(app_config, cache, trials=50, seed=1, quick=True)
    assert record.passed, record.failed
    assert "rotation_counts" in record.params
    names = {a.name for a in record.assertions}
    assert "odd_case:literal_statement_excluded" in names
    assert "determinism:n=6:t=4:workers_1_vs_4" in names
    assert any(name.startswith("cache:") for name in names)


class TestFormulaChecks:
    def test_passes_with_eq4_grid(self, app_config):
        record = AuditRecord(name="formulas")
        _formula_checks(record, app_config)
        assert record.passed, record.failed
        names = {a.name for a in record.assertions}
        for t in (4, 6, 8):
            for a1 in range(2, t - 1, 2):
                assert f"t={t}:a1={a1}:eq4_decreasing" in names

    def test_uses_accept_tol(self, app_config):
        app_config.spectral.accept_tol = 0.0
        record = AuditRecord(name="formulas")
        _formula_checks(record, app_config)
        assert any(name.startswith("closed_form:") for name in record.failed)


class TestCacheSpotCheck:
    def test_exact_entry_passes(self, app_config, cache):
        form = canonical_form(complete(4))
        cache.put(form, q_index(complete(4), 1e-10).q1, 1e-10)
        record = AuditRecord(name="cache")
        _cache_spot_check(record, app_config, cache)
        assert record.passed
        assert record.assertions[0].margin == 1e-10

    def test_drift_beyond_stored_tol_fails(self, app_config, cache):
        form = canonical_form(complete(4))
        cache.put(form, q_index(complete(4), 1e-10).q1 + 5e-10, 1e-10)
        record = AuditRecord(name="cache")
        _cache_spot_check(record, app_config, cache)
        assert record.failed == [f"cache:{form.hex()}"]
