"""
验收套件 (CI 入口)

--quick 时缩小定理扫描与穷举范围
"""

import json
import logging
from typing import Optional

from config.settings import AppConfig
from core.assertion import check
from core.canonical import CanonicalForm, graph_from_form
from families.constructors import g_e_t, kn_minus_e, odd_case_family
from search.audit import AuditRecord, bound_suite, eq4_decrease_check, lemma_suite, minor_equivalence_suite
from search.extremal import SearchConfig, extremal_search, literal_statement_check, verify_theorem
from services.spectral import (
    closed_form_kn_minus_e,
    cubic_largest_root,
    eq3_residual,
    eq3_root,
    lemma24_coeffs,
    lemma31_bounds,
    lemma31_threshold,
    q_index,
)
from services.transforms import run_monotonicity_trials, run_rotation_trials
from storage.qindex_cache import QIndexCache

logger = logging.getLogger(__name__)

EQ3_TOL = 1e-6
CACHE_SPOT_CHECKS = 5


def _theorem_sweep(record: AuditRecord, config: AppConfig, cache: Optional[QIndexCache], quick: bool):
    margin = config.spectral.strict_margin
    agree = config.spectral.accept_tol
    plan = {
        3: range(4, 8) if quick else range(4, 10),
        4: range(5, 8) if quick else range(5, 9),
        5: range(6, 7) if quick else range(6, 9),
        6: range(7, 8) if quick else range(7, 9),
    }
    for t, orders in plan.items():
        for n in orders:
            sc = SearchConfig.from_settings(n, t, config, include_disconnected=False)
            verdict = verify_theorem(sc, cache=cache)
            q_star = verdict.report.q_star
            record.add(check(f"theorem:t={t}:n={n}", verdict.passed, expected="pass", observed=verdict.report.extremal[0].graph6))
            lower, upper = lemma31_bounds(t, n)
            record.add(check(
                f"theorem:t={t}:n={n}:q_star_in_bounds",
                lower + margin < q_star <= upper + margin,
                expected=[lower, upper],
                observed=q_star,
                margin=margin,
            ))
            if t == 3:
                record.add(check(f"theorem:t=3:n={n}:q_star_is_4", abs(q_star - 4) < agree, expected=4.0, observed=q_star, margin=agree))
            if (t, n) == (4, 5):
                root = eq3_root(4, 2)
                record.add(check("theorem:t=4:n=5:cubic_root", abs(q_star - root) < agree, expected=root, observed=q_star, margin=agree))


def _formula_checks(record: AuditRecord, config: AppConfig):
    tol = config.spectral.tol
    agree = config.spectral.accept_tol
    for n in range(3, 13):
        closed = closed_form_kn_minus_e(n)
        q1 = q_index(kn_minus_e(n), tol).q1
        record.add(check(f"closed_form:n={n}", abs(closed - q1) < agree, expected=closed, observed=q1, margin=agree))

    for t in range(3, 9):
        root = cubic_largest_root(lemma24_coeffs(t))
        q1 = q_index(g_e_t(t), tol).q1
        record.add(check(f"lemma24_root:t={t}", abs(root - q1) < agree, expected=root, observed=q1, margin=agree))
        threshold = lemma31_threshold(t)
        record.add(check(f"lemma24_root_above_threshold:t={t}", root > threshold, expected=f"> {threshold}", observed=root))

    for t in (4, 6, 8):
        for a1 in range(2, t - 1, 2):
            residual = eq3_residual(t, a1, q_index(odd_case_family(t, a1), tol).q1)
            record.add(check(f"eq3_residual:t={t}:a1={a1}", abs(residual) < EQ3_TOL, expected=0.0, observed=residual, margin=EQ3_TOL))
            record.add(eq4_decrease_check(t, a1))


def _literal_discrepancy(record: AuditRecord, config: AppConfig, cache: Optional[QIndexCache]):
    sc = SearchConfig.from_settings(5, 4, config, include_disconnected=False)
    proof = verify_theorem(sc, cache=cache)
    literal = literal_statement_check(sc, cache=cache)
    record.add(check("odd_case:proof_prediction_passes", proof.passed, expected=True, observed=proof.passed))
    record.add(check("odd_case:literal_statement_excluded", not literal.passed, expected=False, observed=literal.passed))


def _determinism(record: AuditRecord, config: AppConfig, quick: bool):
    n, t = (6, 4) if quick else (7, 5)
    dumps = []
    for workers in (1, 4):
        sc = SearchConfig.from_settings(n, t, config, worker_count=workers)
        dumps.append(json.dumps(extremal_search(sc).to_dict(), sort_keys=True))
    record.add(check(f"determinism:n={n}:t={t}:workers_1_vs_4", dumps[0] == dumps[1], expected=True, observed=dumps[0] == dumps[1]))


def _cache_spot_check(record: AuditRecord, config: AppConfig, cache: Optional[QIndexCache]):
    if cache is None or len(cache) == 0:
        return
    entries = cache.entries().sort_values("key").head(CACHE_SPOT_CHECKS)
    for row in entries.itertuples(index=False):
        bound = float(row.tol)
        fresh = q_index(graph_from_form(CanonicalForm.from_hex(row.key)), bound).q1
        record.add(check(f"cache:{row.key}", abs(fresh - row.q1) < bound, expected=row.q1, observed=fresh, margin=bound))


def run_selftest(
    config: AppConfig,
    cache: Optional[QIndexCache] = None,
    trials: int = 500,
    seed: int = 0,
    quick: bool = False,
) -> AuditRecord:
    """
    运行验收套件

    Args:
        config: 应用配置
        cache: Q-index 缓存 (会被抽查)
        trials: 随机试验次数
        seed: 随机种子
        quick: 缩小范围

    Returns:
        AuditRecord
    """
    record = AuditRecord(name="selftest", params={"trials": trials, "seed": seed, "quick": quick})
    max_order = 6 if quick else 7
    margin = config.spectral.strict_margin

    _theorem_sweep(record, config, cache, quick)
    _formula_checks(record, config)
    record.assertions += lemma_suite(4, [5, 6], config.spectral.tol, config.search.gap, margin, cache=cache).assertions
    record.assertions += lemma_suite(6, [7], config.spectral.tol, config.search.gap, margin, cache=cache).assertions
    record.assertions += bound_suite(max_order, config.spectral.tol).assertions
    record.assertions += minor_equivalence_suite(max_order, oracle_cap=config.search.oracle_cap).assertions

    for summary in (
        run_monotonicity_trials(trials, seed, tol=config.spectral.tol, margin=margin),
        run_rotation_trials(trials, seed, tol=config.spectral.tol, hypothesis_tol=config.spectral.hypothesis_tol, margin=margin),
    ):
        record.add(check(
            f"trials:{summary.name}",
            summary.passed,
            expected=0,
            observed=len(summary.failures),
            margin=margin,
        ))
        record.params[f"{summary.name}_counts"] = summary.counts

    _literal_discrepancy(record, config, cache)
    _determinism(record, config, quick)
    _cache_spot_check(record, config, cache)

    logger.info(f"selftest: {len(record.assertions)} 条断言, 失败 {record.failed}")
    return record
