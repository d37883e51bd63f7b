"""
谱计算模块

负责:
1. Q 矩阵 (无符号拉普拉斯) 组装
2. 幂迭代求 Q-index 与 Perron 向量
3. 闭式解、三次方程与各类上下界
"""

from __future__ import annotations

import math
import logging
from dataclasses import dataclass
from typing import Tuple

import networkx as nx
import numpy as np

from core.errors import BracketError, ConvergenceError, DisconnectedGraphError, GraphDomainError
from core.graph import Graph, connected_components, induced_subgraph, is_connected, max_degree, to_networkx
from utils.bits import iter_bits, popcount

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITERATIONS = 1_000_000
ROOT_TOL = 1e-13


@dataclass(frozen=True)
class SpectralResult:
    """Q-index 计算结果"""
    q1: float                       # Rayleigh 商
    perron: Tuple[float, ...]       # Perron 向量，最大分量归一为 1
    residual: float                 # ||Qx - q1 x||_inf
    iterations: int


@dataclass(frozen=True)
class CubicSpec:
    """首一三次多项式 x^3 + b x^2 + c x + d 及其最大实根的区间"""
    b: float
    c: float
    d: float
    lo: float
    hi: float

    def value(self, x: float) -> float:
        return ((x + self.b) * x + self.c) * x + self.d

    def coefficients(self) -> Tuple[float, float, float]:
        return (self.b, self.c, self.d)


def q_matrix(g: Graph) -> np.ndarray:
    """Q(G) = D(G) + A(G)"""
    q = np.zeros((g.n, g.n))
    for i, row in enumerate(g.adj):
        for j in iter_bits(row):
            q[i, j] = 1.0
        q[i, i] = popcount(row)
    return q


def q_index(
    g: Graph,
    tol: float = DEFAULT_TOL,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
) -> SpectralResult:
    """
    幂迭代计算 Q-index

    连通图的 Q 矩阵不可约、非负且对角为正，因而本原，从全 1 向量出发必收敛。

    Args:
        g: 连通图
        tol: 残差 (无穷范数) 阈值
        max_iterations: 迭代上限

    Returns:
        SpectralResult
    """
    if tol <= 0:
        raise GraphDomainError(f"tol 必须为正，实际 {tol}")
    if g.n == 1:
        return SpectralResult(q1=0.0, perron=(1.0,), residual=0.0, iterations=0)
    if not is_connected(g):
        raise DisconnectedGraphError("q_index 只接受连通图，不连通时请对各分量分别取最大值")

    q = q_matrix(g)
    x = np.ones(g.n)
    residual = math.inf
    for iteration in range(1, max_iterations + 1):
        y = q @ x
        q1 = float(x @ y) / float(x @ x)
        residual = float(np.max(np.abs(y - q1 * x)))
        if residual < tol:
            logger.debug(f"幂迭代收敛: n={g.n}, 迭代 {iteration} 次, q1={q1:.12g}")
            return SpectralResult(
                q1=q1,
                perron=tuple(float(v) for v in x),
                residual=residual,
                iterations=iteration,
            )
        x = y / np.max(y)

    raise ConvergenceError(
        f"幂迭代 {max_iterations} 次未收敛，最后残差 {residual:.3e}",
        last_residual=residual,
        iterations=max_iterations,
    )


def q_index_components(
    g: Graph,
    tol: float = DEFAULT_TOL,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
) -> float:
    """不连通图的 Q-index: 各连通分量 Q-index 的最大值"""
    best = 0.0
    for comp in connected_components(g):
        part = induced_subgraph(g, comp)
        best = max(best, q_index(part, tol, max_iterations).q1)
    return best


def closed_form_kn_minus_e(n: int) -> float:
    """q1(K_n - e) = 3n/2 - 3 + sqrt(n^2 + 4n - 12) / 2"""
    if n < 3:
        raise GraphDomainError(f"闭式解需要 n >= 3，实际 {n}")
    return 1.5 * n - 3 + math.sqrt(n * n + 4 * n - 12) / 2


def cubic_largest_root(spec: CubicSpec, tol: float = ROOT_TOL) -> float:
    """
    二分求区间内的根

    要求 f(lo) <= 0 < f(hi)；首一三次多项式在最大根右侧为正，
    因此区间上端给定后二分收敛到穿越零点的根
    """
    lo, hi = spec.lo, spec.hi
    f_lo, f_hi = spec.value(lo), spec.value(hi)
    if f_hi == 0:
        return hi
    if not (f_lo <= 0 < f_hi):
        raise BracketError(
            f"区间 [{lo}, {hi}] 两端无变号: f(lo)={f_lo:.6g}, f(hi)={f_hi:.6g}"
        )
    while hi - lo >= tol:
        mid = (lo + hi) / 2
        if mid in (lo, hi):
            break
        if spec.value(mid) <= 0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def lemma24_coeffs(t: int) -> CubicSpec:
    """G^e_t 的特征三次方程: x^3 - (3t-4)x^2 + (t-2)(2t-1)x - 2(t-2)(t-3)"""
    if t < 3:
        raise GraphDomainError(f"需要 t >= 3，实际 {t}")
    return CubicSpec(
        b=-(3 * t - 4),
        c=(t - 2) * (2 * t - 1),
        d=-2 * (t - 2) * (t - 3),
        lo=2 * t - 3,
        hi=2 * t,
    )


def _check_odd_case(t: int, a1: int):
    if t < 4 or a1 % 2 or not 2 <= a1 <= t - 2:
        raise GraphDomainError(f"需要 t >= 4 且 a1 为 [2, t-2] 内偶数，实际 t={t}, a1={a1}")


def _eq3_linear(t: int, a1: int) -> int:
    return 3 * a1 * t - 8 * t - 5 * a1 + 2 * t * t + 6


def eq3_constant(t: int, a1: int) -> int:
    """c = -2 a1^2 - (2t^2 - 10t + 8) a1"""
    return -2 * a1 * a1 - (2 * t * t - 10 * t + 8) * a1


def eq3_coeffs(t: int, a1: int) -> CubicSpec:
    """奇数阶 n = t+1 结构的三次方程"""
    _check_odd_case(t, a1)
    return CubicSpec(
        b=5 - 3 * t - a1,
        c=_eq3_linear(t, a1),
        d=eq3_constant(t, a1),
        lo=2 * t - 3,
        hi=2 * t,
    )


def eq3_residual(t: int, a1: int, q: float) -> float:
    return eq3_coeffs(t, a1).value(q)


def eq3_root(t: int, a1: int) -> float:
    return cubic_largest_root(eq3_coeffs(t, a1))


def eq4_c(t: int, a1: int, q: float) -> float:
    """c(q) = -q^3 - (5-3t-a1) q^2 - (3 a1 t - 8t - 5 a1 + 2t^2 + 6) q"""
    _check_odd_case(t, a1)
    return -q ** 3 - (5 - 3 * t - a1) * q ** 2 - _eq3_linear(t, a1) * q


def a1_penalty(t: int, x: float) -> float:
    """f(x) = -2x^2 - (2t^2 - 10t + 8)x，t >= 4 时在 [2, t-2] 上递减"""
    return -2 * x * x - (2 * t * t - 10 * t + 8) * x


def lemma31_threshold(t: int) -> float:
    """2t - 2 - 2/(t-1)"""
    return 2 * t - 2 - 2 / (t - 1)


def lemma31_sign_value(t: int) -> float:
    """g(2t-2-2/(t-1))，g 为 G^e_t 的三次多项式"""
    return lemma24_coeffs(t).value(lemma31_threshold(t))


def lemma31_sign_closed_form(t: int) -> float:
    """化简后的 -10 + 14/(t-1) + 4/(t-1)^2 - 8/(t-1)^3"""
    k = t - 1
    return -10 + 14 / k + 4 / k ** 2 - 8 / k ** 3


def lemma31_bounds(t: int, n: int) -> Tuple[float, float]:
    """
    极值 q* 的界

    Returns:
        (lower, upper): lower 为严格下界，upper 可取等
    """
    if t < 3 or n < t + 1:
        raise GraphDomainError(f"需要 t >= 3 且 n >= t+1，实际 t={t}, n={n}")
    upper = 2.0 * t - 2
    lower = 2.0 * t - 3 if n == t + 1 else lemma31_threshold(t)
    return lower, upper


def degree_bound(g: Graph) -> float:
    """2 Δ(G)"""
    return 2.0 * max_degree(g)


def merris_bound(g: Graph) -> float:
    """max_u { d(u) + (1/d(u)) Σ_{v∈N(u)} d(v) }"""
    degrees = g.degrees()
    best = -math.inf
    for u, row in enumerate(g.adj):
        if degrees[u] == 0:
            raise GraphDomainError(f"顶点 {u} 是孤立点，Merris 界无定义")
        total = sum(degrees[v] for v in iter_bits(row))
        best = max(best, degrees[u] + total / degrees[u])
    return best


def is_semiregular_bipartite(g: Graph) -> bool:
    """二部图且每一侧度数相同"""
    if not is_connected(g):
        return False
    h = to_networkx(g)
    if not nx.is_bipartite(h):
        return False
    degrees = g.degrees()
    return all(len({degrees[v] for v in side}) <= 1 for side in nx.bipartite.sets(h))


def perron_hypothesis(result: SpectralResult, u: int, v: int, tol: float) -> bool:
    """x_u >= x_v (带容忍度)"""
    return result.perron[u] >= result.perron[v] - tol
