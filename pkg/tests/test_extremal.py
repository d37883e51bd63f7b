"""
极值搜索与定理验证测试
"""

import json

import pytest

from config.settings import AppConfig
from core.canonical import canonical_form
from core.errors import CapacityError, GraphDomainError
from families.constructors import odd_case_family, subdivided_clique
from search.extremal import (
    SearchConfig,
    best_disconnected_q1,
    extremal_search,
    literal_prediction,
    literal_statement_check,
    minor_free_family,
    structural_audit,
    verify_theorem,
)
from services.minor import has_k1t_minor
from services.spectral import eq3_root
from tests.graphs import cycle_graph


def config(n, t, **kwargs):
    kwargs.setdefault("include_disconnected", False)
    return SearchConfig(n=n, t=t, **kwargs)


class TestSearchConfig:
    @pytest.mark.parametrize(
        "kwargs,error",
        [
            ({"n": 4, "t": 2}, GraphDomainError),
            ({"n": 11, "t": 3}, CapacityError),
            ({"n": 7, "t": 3, "max_order": 6}, CapacityError),
            ({"n": 11, "t": 3, "max_order": 12}, CapacityError),
            ({"n": 4, "t": 4}, GraphDomainError),
            ({"n": 5, "t": 3, "tol": 0}, GraphDomainError),
            ({"n": 5, "t": 3, "tol": 1e-8, "gap": 1e-8}, GraphDomainError),
            ({"n": 5, "t": 3, "worker_count": 0}, GraphDomainError),
        ],
    )
    def test_validation(self, kwargs, error):
        with pytest.raises(error):
            SearchConfig(**kwargs)

    def test_from_settings_ignores_none(self):
        app = AppConfig()
        app.search.workers = 3
        sc = SearchConfig.from_settings(6, 4, app, worker_count=None, gap=1e-5)
        assert sc.worker_count == 3
        assert sc.gap == 1e-5

    def test_from_settings_reads_max_order(self):
        app = AppConfig()
        app.search.max_order = 6
        assert SearchConfig.from_settings(6, 4, app).max_order == 6
        with pytest.raises(CapacityError) as info:
            SearchConfig.from_settings(7, 4, app)
        assert "search.max_order" in info.value.hint

    def test_echo_excludes_workers(self):
        assert config(5, 3, worker_count=4).echo() == {"n": 5, "t": 3, "tol": 1e-10, "gap": 1e-6}


class TestFamily:
    def test_degree_two_family(self):
        scanned, family = minor_free_family(7, 3)
        assert len(family) == 2
        assert scanned >= 2

    def test_survivors_are_minor_free(self):
        _, family = minor_free_family(6, 4)
        keys = [form for form, _ in family]
        assert keys == sorted(keys)
        assert all(not has_k1t_minor(g, 4).present for _, g in family)


class TestExtremalSearch:
    def test_four_cycle(self):
        report = extremal_search(config(4, 3))
        assert report.unique
        assert report.q_star == pytest.approx(4, abs=1e-9)
        assert report.extremal[0].form == canonical_form(cycle_graph(4))
        assert report.matches_prediction

    def test_seven_cycle(self):
        report = extremal_search(config(7, 3))
        assert report.extremal[0].form == canonical_form(cycle_graph(7))
        assert report.q_star == pytest.approx(4, abs=1e-9)

    def test_odd_order_structure(self):
        report = extremal_search(config(5, 4))
        assert report.unique
        assert report.extremal[0].form == canonical_form(odd_case_family(4, 2))
        assert report.q_star == pytest.approx(eq3_root(4, 2), abs=1e-8)
        assert report.prediction_name == "proof"

    def test_report_serialises(self):
        data = extremal_search(config(6, 4)).to_dict()
        assert data["config"] == {"n": 6, "t": 4, "tol": 1e-10, "gap": 1e-6}
        assert data["extremal"][0]["graph6"]
        assert data["best_disconnected_q1"] is None
        json.dumps(data)

    def test_disconnected_competitor(self):
        report = extremal_search(config(5, 3, include_disconnected=True))
        # K_3 加孤立点，或 4 阶的 C_4 加孤立点
        assert report.best_disconnected_q1 == pytest.approx(4, abs=1e-9)

    def test_best_disconnected_direct(self):
        assert best_disconnected_q1(6, 4, config(6, 4)) >= 6 - 1e-9

    def test_cache_is_reused(self, cache):
        extremal_search(config(6, 4), cache)
        first_misses = cache.misses
        assert len(cache) > 0
        report = extremal_search(config(6, 4), cache)
        assert cache.misses == first_misses
        assert cache.hits >= len(cache)
        assert report.unique

    def test_parallel_matches_serial(self):
        serial = extremal_search(config(6, 4, worker_count=1)).to_dict()
        parallel = extremal_search(config(6, 4, worker_count=2)).to_dict()
        assert json.dumps(serial, sort_keys=True) == json.dumps(parallel, sort_keys=True)


class TestStructuralAudit:
    def test_subdivided_clique(self):
        audit = structural_audit(subdivided_clique(6, 4), 4)
        assert audit.max_degree == 3
        assert len(audit.a_set) == 3
        assert audit.u_star not in audit.a_set + audit.b_set
        assert sorted(audit.a_set + audit.b_set + [audit.u_star]) == list(range(6))

    def test_census(self):
        audit = structural_audit(odd_case_family(4, 2), 4)
        assert audit.u_star == 0
        assert audit.a0 == [1]
        assert audit.a1 == [2, 3]
        assert audit.census() == {"A": {0: 1, 1: 2}, "B": {0: 1}}
        assert audit.to_dict()["a1_size"] == 2


class TestVerifyTheorem:
    @pytest.mark.parametrize("n,t", [(4, 3), (6, 3), (5, 4), (6, 4)])
    def test_passes(self, n, t):
        verdict = verify_theorem(config(n, t))
        assert verdict.passed, [a for a in verdict.assertions if not a.passed]
        assert [a.name for a in verdict.assertions] == [
            "unique_extremal_class",
            "matches_prediction_proof",
            "runner_up_gap",
        ]

    def test_literal_statement_fails_on_odd_order(self):
        verdict = literal_statement_check(config(5, 4))
        assert not verdict.passed
        failed = [a.name for a in verdict.assertions if not a.passed]
        assert failed == ["matches_prediction_literal"]

    def test_literal_statement_agrees_on_even_order(self):
        assert literal_statement_check(config(6, 5)).passed

    def test_literal_prediction_beyond_t_plus_one(self):
        assert literal_prediction(6, 4) == subdivided_clique(6, 4)

    def test_wrong_prediction_is_reported(self):
        verdict = verify_theorem(config(6, 4), prediction=cycle_graph(6), prediction_name="cycle")
        assert not verdict.passed
        assert verdict.report.predicted != verdict.report.extremal[0].graph6

    @pytest.mark.slow
    @pytest.mark.parametrize("n,t", [(7, 4), (8, 4), (7, 5), (7, 6)])
    def test_larger_cases(self, n, t):
        assert verify_theorem(config(n, t)).passed
