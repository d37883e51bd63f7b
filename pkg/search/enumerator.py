"""
连通图的无重复枚举

规范扩张: 子图 = 父图 + 新顶点 (邻居集 S)。子图 G' 被接受当且仅当
G' 删去 "规范位置最大的非割点" 后与父图同构；同一父图下的子图按规范形式去重。
这样每个同构类恰好由唯一的父类、唯一的邻居集轨道产生一次，内存只需保存一层。
"""

from __future__ import annotations

import logging
from itertools import combinations
from typing import Dict, Iterator, List, Optional, Tuple

from core.canonical import CanonicalForm, canonical_form, canonical_labeling
from core.errors import CapacityError, GraphDomainError, InternalInvariantError
from core.graph import Graph, add_vertex, build_graph, is_connected, is_cut_vertex, relabel, remove_vertex
from utils.bits import mask_of, popcount

logger = logging.getLogger(__name__)

ENUMERATION_CAP = 10
BRUTEFORCE_CAP = 6

Level = List[Tuple[CanonicalForm, Graph]]


def _check_order(n: int, cap: int):
    if n < 1:
        raise GraphDomainError(f"n 必须 >= 1，实际 {n}")
    if n > cap:
        raise CapacityError(f"枚举最多支持 {cap} 个顶点，实际 {n}")


def _resolve_max_deg(n: int, max_deg: Optional[int]) -> int:
    if max_deg is None:
        return n - 1
    if max_deg < 0:
        raise GraphDomainError(f"max_deg 必须 >= 0，实际 {max_deg}")
    return max_deg


def _removal_vertex(g: Graph, perm: List[int]) -> int:
    """规范位置最大的非割点"""
    best, best_pos = -1, -1
    for v in range(g.n):
        if perm[v] > best_pos and not is_cut_vertex(g, v):
            best, best_pos = v, perm[v]
    return best


def expand_parent(parent_form: CanonicalForm, parent: Graph, max_deg: int) -> Level:
    """
    父图的全部被接受子图

    Args:
        parent_form: 父图的规范形式
        parent: 父图 (连通, Δ <= max_deg)
        max_deg: 度数上限

    Returns:
        按规范形式去重后的 (规范形式, 规范标号的子图) 列表
    """
    eligible = [v for v in range(parent.n) if parent.degree(v) < max_deg]
    seen: Dict[CanonicalForm, Graph] = {}
    for size in range(1, min(max_deg, len(eligible)) + 1):
        for subset in combinations(eligible, size):
            child = add_vertex(parent, mask_of(subset))
            form, perm = canonical_labeling(child)
            if form in seen:
                continue
            c = _removal_vertex(child, perm)
            if c != child.n - 1 and canonical_form(remove_vertex(child, c)) != parent_form:
                continue
            seen[form] = relabel(child, perm)
    return list(seen.items())


def _root() -> Level:
    k1 = build_graph(1, [])
    return [(canonical_form(k1), k1)]


def enumerate_level(n: int, max_deg: Optional[int] = None) -> Level:
    """
    n 阶连通图全集 (Δ <= max_deg)，按规范形式升序

    逐层扩张，每层只保留当前阶
    """
    _check_order(n, ENUMERATION_CAP)
    max_deg = _resolve_max_deg(n, max_deg)
    level = _root()
    for order in range(2, n + 1):
        level = expand_level(level, max_deg)
        logger.debug(f"第 {order} 层: {len(level)} 个同构类 (Δ <= {max_deg})")
    return level


def expand_level(parents: Level, max_deg: int) -> Level:
    """由一层父图生成下一层，并检查跨父图不产生重复"""
    children: Dict[CanonicalForm, Graph] = {}
    for parent_form, parent in parents:
        for form, child in expand_parent(parent_form, parent, max_deg):
            if form in children:
                raise InternalInvariantError(f"规范扩张产生重复: {form.hex()}")
            children[form] = child
    return sorted(children.items())


def enumerate_connected(n: int, max_deg: Optional[int] = None) -> Iterator[Graph]:
    """n 阶连通、Δ <= max_deg 的图，每个同构类恰好一个 (规范标号)，按规范形式升序"""
    for _, g in enumerate_level(n, max_deg):
        yield g


def enumerate_connected_bruteforce(n: int, max_deg: Optional[int] = None) -> Iterator[Graph]:
    """
    穷举全部带标号图再按规范形式去重 (n <= 6)

    仅用于校验规范扩张
    """
    _check_order(n, BRUTEFORCE_CAP)
    max_deg = _resolve_max_deg(n, max_deg)
    pairs = [(i, j) for j in range(1, n) for i in range(j)]
    found: Dict[CanonicalForm, Graph] = {}
    for bits in range(1 << len(pairs)):
        if popcount(bits) < n - 1:
            continue
        g = build_graph(n, [pairs[k] for k in range(len(pairs)) if bits >> k & 1])
        if max(g.degrees()) > max_deg or not is_connected(g):
            continue
        form, perm = canonical_labeling(g)
        if form not in found:
            found[form] = relabel(g, perm)
    for _, g in sorted(found.items()):
        yield g
