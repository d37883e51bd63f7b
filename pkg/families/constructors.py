"""
图族构造器

每个构造器返回固定标号的 Graph，标号约定写在各自的文档里；
涉及同构的结论一律通过规范形式判断。
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

from core.errors import CapacityError, GraphDomainError
from core.graph import MAX_VERTICES, Edge, Graph, build_graph
from utils.bits import popcount

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FamilyParams:
    """族参数 (CLI 与报告使用)"""
    t: Optional[int] = None
    n: Optional[int] = None
    s: Optional[int] = None
    a1: Optional[int] = None


def _clique_edges(vertices: List[int]) -> List[Edge]:
    return [(a, b) for i, a in enumerate(vertices) for b in vertices[i + 1:]]


def _check_capacity(n: int):
    if n > MAX_VERTICES:
        raise CapacityError(f"构造结果有 {n} 个顶点，超过上限 {MAX_VERTICES}")


def complete(n: int) -> Graph:
    """K_n"""
    return build_graph(n, _clique_edges(list(range(n))))


def complete_bipartite(s: int, t: int) -> Graph:
    """K_{s,t}: 左侧 0..s-1，右侧 s..s+t-1"""
    if s < 1 or t < 1:
        raise GraphDomainError(f"K_{{s,t}} 需要 s, t >= 1，实际 ({s}, {t})")
    return build_graph(s + t, [(i, s + j) for i in range(s) for j in range(t)])


def disjoint_union(g: Graph, h: Graph) -> Graph:
    """G ∪ H: H 的顶点整体后移 g.n"""
    _check_capacity(g.n + h.n)
    edges = g.edges() + [(i + g.n, j + g.n) for i, j in h.edges()]
    return build_graph(g.n + h.n, edges)


def join(g: Graph, h: Graph) -> Graph:
    """G ∨ H: 并图再加上所有跨边"""
    union = disjoint_union(g, h)
    cross = [(i, g.n + j) for i in range(g.n) for j in range(h.n)]
    return build_graph(union.n, union.edges() + cross)


def kn_minus_e(n: int) -> Graph:
    """K_n - e，删除边 (0, 1)"""
    if n < 2:
        raise GraphDomainError(f"K_n - e 需要 n >= 2，实际 {n}")
    return build_graph(n, [e for e in _clique_edges(list(range(n))) if e != (0, 1)])


def kn_minus_perfect_matching(n: int) -> Graph:
    """
    K_n 删去完美匹配 (0,1),(2,3),...

    奇数 n 直接拒绝: 奇数阶的极图不是匹配补图，应使用 odd_case_family
    """
    if n < 2 or n % 2:
        raise GraphDomainError(
            f"K_n 减完美匹配需要偶数 n >= 2，实际 {n}；奇数阶请使用 odd_case_family"
        )
    matching = {(i, i + 1) for i in range(0, n, 2)}
    return build_graph(n, [e for e in _clique_edges(list(range(n))) if e not in matching])


def literal_statement_graph(n: int) -> Graph:
    """K_n 删去 floor(n/2) 条独立边 (0,1),(2,3),...，按定理陈述字面理解"""
    if n < 2:
        raise GraphDomainError(f"需要 n >= 2，实际 {n}")
    matching = {(i, i + 1) for i in range(0, n - 1, 2)}
    return build_graph(n, [e for e in _clique_edges(list(range(n))) if e not in matching])


def subdivided_clique(n: int, t: int) -> Graph:
    """
    S^{n-t}(K_t)

    K_t 占用顶点 0..t-1，边 (0,1) 被路径 0, t, t+1, ..., n-1, 1 替代；
    n = t 时返回 K_t 本身
    """
    if t < 3:
        raise GraphDomainError(f"S^{{n-t}}(K_t) 需要 t >= 3，实际 {t}")
    if n < t:
        raise GraphDomainError(f"S^{{n-t}}(K_t) 需要 n >= t，实际 n={n}, t={t}")
    _check_capacity(n)
    if n == t:
        return complete(t)
    edges = [e for e in _clique_edges(list(range(t))) if e != (0, 1)]
    path = [0] + list(range(t, n)) + [1]
    edges += list(zip(path, path[1:]))
    return build_graph(n, edges)


def g_e_t(t: int) -> Graph:
    """G^e_t: K_t 删去边 (0,1)，再挂悬挂点 t~0 与 t+1~1，共 t+2 个顶点"""
    if t < 3:
        raise GraphDomainError(f"G^e_t 需要 t >= 3，实际 {t}")
    edges = [e for e in _clique_edges(list(range(t))) if e != (0, 1)]
    edges += [(0, t), (1, t + 1)]
    return build_graph(t + 2, edges)


def f_family(s: int, t: int, n: int) -> Graph:
    """
    F_{s,t}(n) = K_{s-1} ∨ (p K_t ∪ K_r)，其中 n - s + 1 = p t + r

    顶点 0..s-2 是 K_{s-1}，之后依次是 p 个 K_t 和一个 K_r；
    s = 1 时没有连接部分，结果可以不连通
    """
    if s < 1 or t < 1 or n < s:
        raise GraphDomainError(f"F_{{s,t}}(n) 参数非法: s={s}, t={t}, n={n}")
    _check_capacity(n)
    rest = n - s + 1
    p, r = divmod(rest, t)
    hub = list(range(s - 1))
    edges = _clique_edges(hub)
    start = s - 1
    for size in [t] * p + ([r] if r else []):
        block = list(range(start, start + size))
        edges += _clique_edges(block)
        start += size
    edges += [(h, v) for h in hub for v in range(s - 1, n)]
    logger.debug(f"F_{{{s},{t}}}({n}): p={p}, r={r}")
    return build_graph(n, edges)


def odd_case_family(t: int, a1: int) -> Graph:
    """
    n = t+1 情形的证明结构

    顶点: u* = 0；A_0 = 1..t-1-a1；A_1 为其后的 a1 个顶点；w = t。
    {u*} ∪ A 诱导 K_t 删去 A_1 上的完美匹配，w 恰与 A_1 相邻。
    """
    if t < 4:
        raise GraphDomainError(f"odd_case_family 需要 t >= 4，实际 {t}")
    if a1 % 2 or not 2 <= a1 <= t - 2:
        raise GraphDomainError(f"a1 必须是 [2, t-2] 内的偶数，实际 t={t}, a1={a1}")
    a1_vertices = list(range(t - a1, t))
    matching = {(a1_vertices[i], a1_vertices[i + 1]) for i in range(0, a1, 2)}
    w = t
    edges = [e for e in _clique_edges(list(range(t))) if e not in matching]
    edges += [(v, w) for v in a1_vertices]
    return build_graph(t + 1, edges)


def predicted_extremal(n: int, t: int) -> Graph:
    """
    证明给出的极图

    n = t+1 偶数: K_n 减完美匹配；n = t+1 奇数: odd_case_family(t, t-2)；
    n >= t+2: S^{n-t}(K_t)
    """
    if t < 3 or n < t + 1:
        raise GraphDomainError(f"预测需要 t >= 3 且 n >= t+1，实际 n={n}, t={t}")
    if n == t + 1:
        if n % 2 == 0:
            return kn_minus_perfect_matching(n)
        return odd_case_family(t, t - 2)
    return subdivided_clique(n, t)


def _require(params: FamilyParams, *names: str):
    missing = [name for name in names if getattr(params, name) is None]
    if missing:
        raise GraphDomainError(f"缺少族参数: {', '.join('--' + m for m in missing)}")


FAMILY_BUILDERS: Dict[str, Tuple[Tuple[str, ...], Callable[..., Graph]]] = {
    "complete": (("n",), complete),
    "bipartite": (("s", "t"), complete_bipartite),
    "knme": (("n",), kn_minus_e),
    "knmm": (("n",), kn_minus_perfect_matching),
    "sK": (("n", "t"), subdivided_clique),
    "get": (("t",), g_e_t),
    "f": (("s", "t", "n"), f_family),
    "odd": (("t", "a1"), odd_case_family),
}


def family_by_name(name: str, params: FamilyParams) -> Graph:
    """按名称构造图族成员 (CLI --family)"""
    entry = FAMILY_BUILDERS.get(name)
    if entry is None:
        raise GraphDomainError(f"未知图族: {name}，可选 {sorted(FAMILY_BUILDERS)}")
    names, builder = entry
    _require(params, *names)
    return builder(*(getattr(params, k) for k in names))


def degree_census(g: Graph) -> Dict[int, int]:
    """度数 -> 顶点个数"""
    census: Dict[int, int] = {}
    for row in g.adj:
        d = popcount(row)
        census[d] = census.get(d, 0) + 1
    return dict(sorted(census.items()))
