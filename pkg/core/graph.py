"""
图的值类型

简单无向图，邻接矩阵每行存为一个位掩码，最多 64 个顶点。
Graph 不可变，所有编辑操作都返回新图。
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Iterator, List, Sequence, Tuple

import networkx as nx

from core.errors import CapacityError, GraphDomainError
from utils.bits import full_mask, iter_bits, lowest_bit, popcount

logger = logging.getLogger(__name__)

MAX_VERTICES = 64

Edge = Tuple[int, int]


@dataclass(frozen=True)
class VertexSet:
    """宿主图上的顶点子集"""
    bits: int = 0

    def __len__(self) -> int:
        return popcount(self.bits)

    def __contains__(self, v: int) -> bool:
        return bool(self.bits >> v & 1)

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.bits)

    def to_list(self) -> List[int]:
        return list(iter_bits(self.bits))

    @classmethod
    def of(cls, vertices: Iterable[int]) -> "VertexSet":
        bits = 0
        for v in vertices:
            bits |= 1 << v
        return cls(bits)


@dataclass(frozen=True)
class Graph:
    """简单无向图: n 个顶点，adj[i] 第 j 位为 1 当且仅当 ij 是边"""
    n: int
    adj: Tuple[int, ...]

    @property
    def m(self) -> int:
        """边数"""
        return sum(popcount(row) for row in self.adj) // 2

    @property
    def vertex_mask(self) -> int:
        return full_mask(self.n)

    def degree(self, v: int) -> int:
        self._check_vertex(v)
        return popcount(self.adj[v])

    def degrees(self) -> List[int]:
        return [popcount(row) for row in self.adj]

    def has_edge(self, u: int, v: int) -> bool:
        self._check_vertex(u)
        self._check_vertex(v)
        return bool(self.adj[u] >> v & 1)

    def neighbors(self, v: int) -> VertexSet:
        self._check_vertex(v)
        return VertexSet(self.adj[v])

    def edges(self) -> List[Edge]:
        """所有边 (i < j)，按 (i, j) 字典序"""
        result = []
        for i, row in enumerate(self.adj):
            for j in iter_bits(row >> (i + 1)):
                result.append((i, i + 1 + j))
        return result

    def add_edge(self, u: int, v: int) -> "Graph":
        _check_pair(self.n, u, v)
        rows = list(self.adj)
        rows[u] |= 1 << v
        rows[v] |= 1 << u
        return Graph(self.n, tuple(rows))

    def remove_edge(self, u: int, v: int) -> "Graph":
        _check_pair(self.n, u, v)
        rows = list(self.adj)
        rows[u] &= ~(1 << v)
        rows[v] &= ~(1 << u)
        return Graph(self.n, tuple(rows))

    def _check_vertex(self, v: int):
        if not 0 <= v < self.n:
            raise GraphDomainError(f"顶点 {v} 超出范围 0..{self.n - 1}")


def _check_pair(n: int, i: int, j: int):
    if not (0 <= i < n and 0 <= j < n):
        raise GraphDomainError(f"边 ({i}, {j}) 的端点超出范围 0..{n - 1}")
    if i == j:
        raise GraphDomainError(f"不允许自环: ({i}, {j})")


def _check_order(n: int):
    if n > MAX_VERTICES:
        raise CapacityError(
            f"顶点数 {n} 超过上限 {MAX_VERTICES}",
            hint="每行邻接用一个 64 位字表示，无法容纳更大的图",
        )
    if n < 1:
        raise GraphDomainError(f"顶点数必须 >= 1，实际为 {n}")


def build_graph(n: int, edges: Iterable[Edge]) -> Graph:
    """
    由边表构建图

    Args:
        n: 顶点数 (1..64)
        edges: 顶点对序列，重复边会被合并

    Returns:
        Graph: 对称、无自环的图
    """
    _check_order(n)
    rows = [0] * n
    for i, j in edges:
        _check_pair(n, i, j)
        rows[i] |= 1 << j
        rows[j] |= 1 << i
    return Graph(n, tuple(rows))


def degree(g: Graph, v: int) -> int:
    return g.degree(v)


def max_degree(g: Graph) -> int:
    return max(g.degrees())


def min_degree(g: Graph) -> int:
    return min(g.degrees())


def reach(g: Graph, start: int, allowed: int) -> int:
    """在 allowed 诱导的子图中，从 start 出发可达的顶点集合"""
    if not allowed >> start & 1:
        return 0
    seen = 1 << start
    frontier = seen
    while frontier:
        nxt = 0
        for v in iter_bits(frontier):
            nxt |= g.adj[v]
        nxt &= allowed & ~seen
        seen |= nxt
        frontier = nxt
    return seen


def is_connected_set(g: Graph, mask: int) -> bool:
    """mask 诱导的子图是否连通 (空集视为不连通)"""
    if not mask:
        return False
    return reach(g, lowest_bit(mask), mask) == mask


def is_connected(g: Graph) -> bool:
    """从顶点 0 做广度优先闭包，能否到达全部顶点"""
    return is_connected_set(g, g.vertex_mask)


def connected_components(g: Graph) -> List[int]:
    """连通分量的顶点掩码，按最小顶点排序"""
    components = []
    rest = g.vertex_mask
    while rest:
        comp = reach(g, lowest_bit(rest), rest)
        components.append(comp)
        rest &= ~comp
    return components


def is_cut_vertex(g: Graph, v: int) -> bool:
    """删除 v 后剩余顶点是否不连通 (假定 g 连通)"""
    rest = g.vertex_mask & ~(1 << v)
    if not rest:
        return False
    return not is_connected_set(g, rest)


def boundary(g: Graph, mask: int) -> int:
    """N(S) \\ S"""
    nbrs = 0
    for v in iter_bits(mask):
        nbrs |= g.adj[v]
    return nbrs & ~mask


def relabel(g: Graph, perm: Sequence[int]) -> Graph:
    """
    重新编号

    Args:
        perm: perm[v] 为顶点 v 的新编号

    Returns:
        Graph: 同构的新图
    """
    if sorted(perm) != list(range(g.n)):
        raise GraphDomainError("perm 不是 0..n-1 的排列")
    rows = [0] * g.n
    for v, row in enumerate(g.adj):
        new_row = 0
        for w in iter_bits(row):
            new_row |= 1 << perm[w]
        rows[perm[v]] = new_row
    return Graph(g.n, tuple(rows))


def induced_subgraph(g: Graph, mask: int) -> Graph:
    """mask 诱导的子图，保留顶点按原编号升序重新编号"""
    kept = list(iter_bits(mask & g.vertex_mask))
    if not kept:
        raise GraphDomainError("诱导子图不能为空")
    index = {v: i for i, v in enumerate(kept)}
    rows = []
    for v in kept:
        row = 0
        for w in iter_bits(g.adj[v] & mask):
            row |= 1 << index[w]
        rows.append(row)
    return Graph(len(kept), tuple(rows))


def remove_vertex(g: Graph, v: int) -> Graph:
    g._check_vertex(v)
    return induced_subgraph(g, g.vertex_mask & ~(1 << v))


def add_vertex(g: Graph, neighbors: int) -> Graph:
    """追加一个新顶点 (编号 n)，与 neighbors 中的顶点相邻"""
    _check_order(g.n + 1)
    if neighbors & ~g.vertex_mask:
        raise GraphDomainError("新顶点的邻居超出范围")
    rows = list(g.adj)
    for w in iter_bits(neighbors):
        rows[w] |= 1 << g.n
    rows.append(neighbors)
    return Graph(g.n + 1, tuple(rows))


def is_regular(g: Graph) -> bool:
    degs = g.degrees()
    return min(degs) == max(degs)


def to_networkx(g: Graph) -> nx.Graph:
    """转成 networkx 图，顶点 0..n-1"""
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


def from_networkx(h: nx.Graph) -> Graph:
    """由顶点为 0..n-1 的 networkx 图构建"""
    n = h.number_of_nodes()
    if set(h.nodes) != set(range(n)):
        raise GraphDomainError("networkx 图的顶点必须是 0..n-1")
    return build_graph(n, h.edges())
