"""
谱计算测试

numpy.linalg.eigvalsh 作为独立的特征值预言机
"""

import math

import numpy as np
import pytest

from core.errors import BracketError, ConvergenceError, DisconnectedGraphError, GraphDomainError
from core.graph import build_graph
from families.constructors import (
    complete,
    complete_bipartite,
    g_e_t,
    kn_minus_e,
    odd_case_family,
    subdivided_clique,
)
from services.spectral import (
    CubicSpec,
    a1_penalty,
    closed_form_kn_minus_e,
    cubic_largest_root,
    degree_bound,
    eq3_coeffs,
    eq3_residual,
    eq3_root,
    eq4_c,
    is_semiregular_bipartite,
    lemma24_coeffs,
    lemma31_bounds,
    lemma31_sign_closed_form,
    lemma31_sign_value,
    lemma31_threshold,
    merris_bound,
    perron_hypothesis,
    q_index,
    q_index_components,
    q_matrix,
)
from tests.graphs import cycle_graph, path_graph, star_graph

GOLDEN = (5 + math.sqrt(5)) / 2


def eig_max(g):
    return float(np.linalg.eigvalsh(q_matrix(g))[-1])


class TestQMatrix:
    def test_edge(self):
        assert q_matrix(complete(2)).tolist() == [[1, 1], [1, 1]]

    def test_path(self):
        assert q_matrix(path_graph(3)).tolist() == [[1, 1, 0], [1, 2, 1], [0, 1, 1]]

    def test_cycle_diagonal(self):
        q = q_matrix(cycle_graph(4))
        assert np.all(np.diag(q) == 2)
        assert q[0, 1] == 1 and q[0, 2] == 0


class TestQIndex:
    def test_edge(self):
        assert q_index(complete(2)).q1 == pytest.approx(2, abs=1e-9)

    @pytest.mark.parametrize("n", [3, 5, 8])
    def test_complete(self, n):
        assert q_index(complete(n)).q1 == pytest.approx(2 * n - 2, abs=1e-9)

    def test_path_three(self):
        assert q_index(path_graph(3)).q1 == pytest.approx(3, abs=1e-9)

    def test_single_vertex(self):
        result = q_index(build_graph(1, []))
        assert result.q1 == 0.0
        assert result.iterations == 0

    def test_residual_and_normalisation(self):
        result = q_index(subdivided_clique(7, 4), tol=1e-10)
        assert result.residual < 1e-10
        assert max(result.perron) == pytest.approx(1.0)
        assert min(result.perron) > 0

    @pytest.mark.parametrize("g", [subdivided_clique(8, 5), g_e_t(6), odd_case_family(6, 4), complete_bipartite(2, 5)])
    def test_matches_eigensolver(self, g):
        assert q_index(g).q1 == pytest.approx(eig_max(g), abs=1e-8)

    def test_disconnected_rejected(self):
        with pytest.raises(DisconnectedGraphError):
            q_index(build_graph(4, [(0, 1), (2, 3)]))

    def test_components_maximum(self):
        g = build_graph(5, [(0, 1), (2, 3), (3, 4), (2, 4)])
        assert q_index_components(g) == pytest.approx(4, abs=1e-9)

    def test_convergence_error_carries_residual(self):
        with pytest.raises(ConvergenceError) as info:
            q_index(path_graph(9), tol=1e-12, max_iterations=3)
        assert info.value.iterations == 3
        assert info.value.last_residual > 0

    def test_tol_must_be_positive(self):
        with pytest.raises(GraphDomainError):
            q_index(complete(3), tol=0)

    def test_perron_hypothesis(self):
        result = q_index(star_graph(3))
        assert perron_hypothesis(result, 0, 1, 1e-12)
        assert not perron_hypothesis(result, 1, 0, 1e-12)


class TestClosedForm:
    def test_small(self):
        assert closed_form_kn_minus_e(3) == pytest.approx(3.0)
        assert closed_form_kn_minus_e(4) == pytest.approx(3 + math.sqrt(20) / 2)

    @pytest.mark.parametrize("n", range(3, 13))
    def test_agrees_with_power_iteration(self, n):
        assert closed_form_kn_minus_e(n) == pytest.approx(q_index(kn_minus_e(n)).q1, abs=1e-8)

    def test_domain(self):
        with pytest.raises(GraphDomainError):
            closed_form_kn_minus_e(2)


class TestCubic:
    def test_golden_root(self):
        spec = lemma24_coeffs(3)
        assert spec.coefficients() == (-5, 5, 0)
        assert cubic_largest_root(spec) == pytest.approx(GOLDEN, abs=1e-10)

    def test_coefficients_t5(self):
        assert lemma24_coeffs(5).coefficients() == (-11, 27, -12)

    def test_zero_cubic(self):
        assert cubic_largest_root(CubicSpec(0, 0, 0, -1, 1)) == pytest.approx(0, abs=1e-9)

    def test_largest_of_three_roots(self):
        # (x-1)(x-2)(x-3)
        assert cubic_largest_root(CubicSpec(-6, 11, -6, 2.5, 4)) == pytest.approx(3, abs=1e-10)

    def test_bracket_error(self):
        with pytest.raises(BracketError):
            cubic_largest_root(CubicSpec(-6, 11, -6, 10, 20))

    @pytest.mark.parametrize("t", range(3, 9))
    def test_g_e_t_root(self, t):
        root = cubic_largest_root(lemma24_coeffs(t))
        assert root == pytest.approx(q_index(g_e_t(t)).q1, abs=1e-8)
        assert root > lemma31_threshold(t)

    def test_odd_case_cubic(self):
        spec = eq3_coeffs(4, 2)
        assert spec.coefficients() == (-9, 20, -8)
        root = eq3_root(4, 2)
        assert root == pytest.approx(5.7785, abs=1e-4)
        assert root == pytest.approx(q_index(odd_case_family(4, 2)).q1, abs=1e-8)

    @pytest.mark.parametrize("t,a1", [(4, 2), (6, 2), (6, 4), (8, 4)])
    def test_residual_vanishes(self, t, a1):
        q = q_index(odd_case_family(t, a1)).q1
        assert abs(eq3_residual(t, a1, q)) < 1e-6

    def test_eq4_is_cubic_minus_constant(self):
        q = 5.5
        assert eq4_c(4, 2, q) == pytest.approx(-eq3_residual(4, 2, q) + eq3_coeffs(4, 2).d)

    def test_a1_penalty_decreasing(self):
        values = [a1_penalty(6, x) for x in range(2, 5)]
        assert values == sorted(values, reverse=True)

    def test_odd_case_domain(self):
        with pytest.raises(GraphDomainError):
            eq3_coeffs(4, 3)


class TestBounds:
    def test_extremal_bounds(self):
        assert lemma31_bounds(3, 4) == (3, 4)
        lower, upper = lemma31_bounds(4, 6)
        assert lower == pytest.approx(16 / 3) and upper == 6
        assert lemma31_bounds(5, 6) == (7, 8)

    def test_bounds_domain(self):
        with pytest.raises(GraphDomainError):
            lemma31_bounds(4, 4)

    @pytest.mark.parametrize("t", range(3, 10))
    def test_sign_check(self, t):
        value = lemma31_sign_value(t)
        assert value < 0
        assert value == pytest.approx(lemma31_sign_closed_form(t), abs=1e-8)

    def test_merris_equality_cases(self):
        assert merris_bound(cycle_graph(6)) == pytest.approx(4)
        assert q_index(cycle_graph(6)).q1 == pytest.approx(4, abs=1e-9)
        assert merris_bound(star_graph(3)) == pytest.approx(4)
        assert q_index(star_graph(3)).q1 == pytest.approx(4, abs=1e-9)
        assert is_semiregular_bipartite(star_graph(3))

    def test_semiregular_bipartite_classifier(self):
        assert is_semiregular_bipartite(complete_bipartite(2, 3))
        assert is_semiregular_bipartite(cycle_graph(6))
        assert not is_semiregular_bipartite(cycle_graph(5))
        assert not is_semiregular_bipartite(path_graph(4))
        assert not is_semiregular_bipartite(build_graph(4, [(0, 1), (2, 3)]))

    def test_merris_strict(self):
        g = kn_minus_e(4)
        assert merris_bound(g) == pytest.approx(16 / 3)
        assert q_index(g).q1 < merris_bound(g) - 1e-3
        assert not is_semiregular_bipartite(g)

    def test_merris_isolated_vertex(self):
        with pytest.raises(GraphDomainError):
            merris_bound(build_graph(3, [(0, 1)]))

    def test_degree_bound(self):
        assert degree_bound(cycle_graph(4)) == 4
        assert q_index(path_graph(4)).q1 == pytest.approx(2 + math.sqrt(2), abs=1e-9)
        assert degree_bound(path_graph(4)) == 4
        g = subdivided_clique(6, 4)
        assert degree_bound(g) == 6
        assert q_index(g).q1 < 6 - 1e-3
