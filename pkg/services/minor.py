"""
K_{1,t} 子式判定

快速路径: 枚举所有连通子集 S，求 |N(S) \\ S| 的最大值。
把 S 收缩成星的中心、每个外邻点作为叶，即得 K_{1,t} 子式；反之亦然。
这一刻画由 branch_set_oracle 在小图上交叉验证。
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import List, Optional, Tuple

import networkx as nx

from core.errors import CapacityError, GraphDomainError
from core.graph import Graph, VertexSet, is_connected_set, max_degree, to_networkx
from utils.bits import bits_to_list, full_mask, iter_bits, lowest_bit, popcount

logger = logging.getLogger(__name__)

DEFAULT_SCAN_CAP = 24
ORACLE_CAP = 10
UNRESTRICTED_ORACLE_CAP = 7


class MinorKind(Enum):
    WITNESS = "witness"
    ABSENT = "absent"


@dataclass(frozen=True)
class MinorCertificate:
    """
    判定证书

    WITNESS 时 witness_set 连通、boundary 为其外邻点 (至少 t 个)；
    ABSENT 只是穷举完毕的标记，scan_cap 记录所用的扫描上限
    """
    kind: MinorKind
    t: int
    witness_set: Optional[VertexSet] = None
    boundary: Optional[VertexSet] = None
    scan_cap: int = DEFAULT_SCAN_CAP

    @property
    def present(self) -> bool:
        return self.kind is MinorKind.WITNESS

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "t": self.t,
            "witness_set": self.witness_set.to_list() if self.witness_set else None,
            "boundary": self.boundary.to_list() if self.boundary else None,
            "scan_cap": self.scan_cap,
        }


def single_vertex_bound(g: Graph) -> int:
    """Δ(G): 单点子集的外邻点数，是最大连通边界的下界"""
    return max_degree(g)


class _BoundaryScan:
    """
    连通子集的深度优先扫描

    以 S 中最小顶点为根；扩展集之外已处理过的顶点加入 banned，每个连通子集至多访问一次。
    S 的任一真连通超集 S' 的边界不超过 |N(S) \\ S| + |V \\ N[S]| - 1，
    达不到目标 (或当前最优) 的子树整体跳过。
    """

    def __init__(self, g: Graph, target: Optional[int]):
        self.g = g
        self.target = target
        self.everything = full_mask(g.n)
        self.best_size = -1
        self.best_mask = 0
        self.done = False

    def run(self) -> Tuple[int, int]:
        for root in range(self.g.n):
            if self.done:
                break
            banned = (1 << (root + 1)) - 1
            nbrs = self.g.adj[root]
            self._grow(1 << root, nbrs, nbrs & ~banned, banned)
        return self.best_size, self.best_mask

    def _grow(self, subset: int, nbrs: int, ext: int, banned: int):
        size = popcount(nbrs & ~subset)
        if size > self.best_size or (size == self.best_size and subset < self.best_mask):
            self.best_size, self.best_mask = size, subset
            if self.target is not None and size >= self.target:
                self.done = True
                return

        outside = popcount(self.everything & ~(nbrs | subset))
        floor = self.target if self.target is not None else self.best_size
        if size + outside - 1 < floor:
            return

        while ext and not self.done:
            v = lowest_bit(ext)
            bit = 1 << v
            ext &= ~bit
            grown = subset | bit
            child_ext = (ext | self.g.adj[v]) & ~grown & ~banned
            self._grow(grown, nbrs | self.g.adj[v], child_ext, banned)
            banned |= bit


def _scan(g: Graph, target: Optional[int], cap: int) -> Tuple[int, int]:
    if g.n > cap:
        raise CapacityError(
            f"连通子集扫描最多支持 {cap} 个顶点，实际 {g.n}",
            hint=f"无需扫描的下界: Δ(G) = {single_vertex_bound(g)}",
        )
    return _BoundaryScan(g, target).run()


def max_connected_boundary(g: Graph, cap: int = DEFAULT_SCAN_CAP) -> Tuple[int, VertexSet]:
    """
    所有非空连通子集 S 上 |N(S) \\ S| 的最大值

    Returns:
        (size, witness): 并列时取掩码最小的 S
    """
    size, mask = _scan(g, None, cap)
    return size, VertexSet(mask)


def has_k1t_minor(g: Graph, t: int, cap: int = DEFAULT_SCAN_CAP) -> MinorCertificate:
    """
    判定 G 是否含 K_{1,t} 子式

    扫描遇到边界 >= t 的连通子集即提前返回
    """
    if t < 1:
        raise GraphDomainError(f"t 必须 >= 1，实际 {t}")
    if max_degree(g) >= t:
        # 单点即可作为中心
        center = next(v for v in range(g.n) if g.degree(v) >= t)
        return MinorCertificate(
            kind=MinorKind.WITNESS,
            t=t,
            witness_set=VertexSet(1 << center),
            boundary=VertexSet(g.adj[center]),
            scan_cap=cap,
        )
    size, mask = _scan(g, t, cap)
    if size >= t:
        return MinorCertificate(
            kind=MinorKind.WITNESS,
            t=t,
            witness_set=VertexSet(mask),
            boundary=VertexSet(_outside_neighbors(g, mask)),
            scan_cap=cap,
        )
    logger.debug(f"无 K_1,{t} 子式: n={g.n}, 最大连通边界 {size}")
    return MinorCertificate(kind=MinorKind.ABSENT, t=t, scan_cap=cap)


def _outside_neighbors(g: Graph, mask: int) -> int:
    nbrs = 0
    for v in iter_bits(mask):
        nbrs |= g.adj[v]
    return nbrs & ~mask


def _nx_connected(h: nx.Graph, nodes: List[int]) -> bool:
    return bool(nodes) and nx.is_connected(h.subgraph(nodes))


def branch_set_oracle(g: Graph, t: int, unrestricted: bool = False, cap: int = ORACLE_CAP) -> bool:
    """
    分支集穷举 (独立于扫描的正确性预言机)

    寻找两两不交的连通分支集 B_0, B_1..B_t，且每个 B_i 与 B_0 相邻。
    默认叶分支集取单点；unrestricted=True 时叶分支集可为任意连通集，
    用来检验单点化不失一般性。

    Args:
        g: 图 (n <= cap；unrestricted 时另受 7 的上限)
        t: 星的叶数
        unrestricted: 叶分支集是否可为任意连通集
        cap: 顶点数上限 (配置项 search.oracle_cap)

    Returns:
        bool: 是否存在 K_{1,t} 子式
    """
    if t < 1:
        raise GraphDomainError(f"t 必须 >= 1，实际 {t}")
    if unrestricted:
        cap = min(cap, UNRESTRICTED_ORACLE_CAP)
    if g.n > cap:
        raise CapacityError(f"分支集预言机最多支持 {cap} 个顶点，实际 {g.n}")
    if g.n < t + 1:
        return False

    h = to_networkx(g)
    vertices = list(range(g.n))
    for size in range(1, g.n - t + 1):
        for center in combinations(vertices, size):
            if not _nx_connected(h, list(center)):
                continue
            center_set = set(center)
            candidates = [
                v for v in vertices
                if v not in center_set and any(h.has_edge(v, c) for c in center)
            ]
            if not unrestricted:
                if len(candidates) >= t:
                    return True
                continue
            if _disjoint_leaf_sets(h, center_set, t):
                return True
    return False


def _disjoint_leaf_sets(h: nx.Graph, center: set, t: int) -> bool:
    """回溯选取 t 个两两不交、与中心相邻的连通叶分支集"""
    rest = [v for v in h.nodes if v not in center]
    leaf_sets = []
    for size in range(1, len(rest) + 1):
        for nodes in combinations(rest, size):
            if not _nx_connected(h, list(nodes)):
                continue
            if any(h.has_edge(v, c) for v in nodes for c in center):
                leaf_sets.append(frozenset(nodes))

    def backtrack(start: int, used: frozenset, chosen: int) -> bool:
        if chosen == t:
            return True
        # 剩余顶点不够再放 t - chosen 个非空集合
        if len(rest) - len(used) < t - chosen:
            return False
        for i in range(start, len(leaf_sets)):
            leaf = leaf_sets[i]
            if leaf & used:
                continue
            if backtrack(i + 1, used | leaf, chosen + 1):
                return True
        return False

    return backtrack(0, frozenset(), 0)


def verify_certificate(g: Graph, cert: MinorCertificate, oracle_cap: int = ORACLE_CAP) -> bool:
    """
    独立复核证书

    WITNESS: 检查连通性、不交性、相邻性与边界大小；
    ABSENT: n 不超过预言机上限时用 branch_set_oracle 复核
    """
    if cert.kind is MinorKind.ABSENT:
        if g.n <= oracle_cap:
            return not branch_set_oracle(g, cert.t, cap=oracle_cap)
        return max_connected_boundary(g, cap=cert.scan_cap)[0] < cert.t

    if cert.witness_set is None or cert.boundary is None:
        return False
    subset = cert.witness_set.bits
    leaves = cert.boundary.bits
    if not is_connected_set(g, subset) or subset & leaves:
        return False
    if len(cert.boundary) < cert.t:
        return False
    for leaf in bits_to_list(leaves):
        if not g.adj[leaf] & subset:
            return False
    return True
