"""
规范标号

迭代度数细分得到有序划分，再对所有离散细分做回溯，取邻接位串字典序最小者。
回溯过程中发现的自同构用于剪枝 (同一轨道的顶点只需个体化一次)。
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from core.errors import GraphDomainError
from core.graph import Graph, build_graph, relabel
from utils.bits import mask_of, popcount

logger = logging.getLogger(__name__)

Cells = List[List[int]]


@dataclass(frozen=True, order=True)
class CanonicalForm:
    """与标号无关的邻接编码，字节相同当且仅当同构"""
    data: bytes

    def hex(self) -> str:
        return self.data.hex()

    @classmethod
    def from_hex(cls, text: str) -> "CanonicalForm":
        return cls(bytes.fromhex(text))


def _refine(g: Graph, cells: Cells) -> Cells:
    """按各格中邻居数反复细分，直到稳定 (等价划分)"""
    changed = True
    while changed:
        changed = False
        masks = [mask_of(cell) for cell in cells]
        refined: Cells = []
        for cell in cells:
            if len(cell) == 1:
                refined.append(cell)
                continue
            signature = {
                v: tuple(popcount(g.adj[v] & m) for m in masks) for v in cell
            }
            keys = sorted(set(signature.values()))
            if len(keys) == 1:
                refined.append(cell)
                continue
            changed = True
            for key in keys:
                refined.append([v for v in cell if signature[v] == key])
        cells = refined
    return cells


def _leaf_key(g: Graph, order: Sequence[int]) -> int:
    """按位置顺序读出上三角位串 (列优先)，首位为最高位"""
    key = 0
    for j in range(1, len(order)):
        row = g.adj[order[j]]
        for i in range(j):
            key = (key << 1) | (row >> order[i] & 1)
    return key


def _orbits(generators: List[Tuple[int, ...]], fixed: Sequence[int], n: int) -> List[int]:
    """只用逐点固定 fixed 的生成元，求顶点轨道 (并查集根)"""
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for gamma in generators:
        if any(gamma[v] != v for v in fixed):
            continue
        for v in range(n):
            a, b = find(v), find(gamma[v])
            if a != b:
                parent[max(a, b)] = min(a, b)
    return [find(v) for v in range(n)]


class _LabelSearch:
    """单次规范标号搜索的状态"""

    def __init__(self, g: Graph):
        self.g = g
        self.best_key: Optional[int] = None
        self.best_order: Optional[List[int]] = None
        self.generators: List[Tuple[int, ...]] = []
        self.leaves = 0

    def run(self, cells: Cells, fixed: List[int]):
        cells = _refine(self.g, cells)
        target = None
        for idx, cell in enumerate(cells):
            if len(cell) > 1 and (target is None or len(cell) < len(cells[target])):
                target = idx
        if target is None:
            self._leaf([cell[0] for cell in cells])
            return

        tried: List[int] = []
        for v in cells[target]:
            if tried:
                roots = _orbits(self.generators, fixed, self.g.n)
                if any(roots[v] == roots[w] for w in tried):
                    continue
            tried.append(v)
            rest = [w for w in cells[target] if w != v]
            child = cells[:target] + [[v], rest] + cells[target + 1:]
            self.run(child, fixed + [v])

    def _leaf(self, order: List[int]):
        self.leaves += 1
        key = _leaf_key(self.g, order)
        if self.best_key is None or key < self.best_key:
            self.best_key = key
            self.best_order = order
        elif key == self.best_key:
            # 两个叶子给出同一个图: best^-1 ∘ new 是自同构
            position = {v: i for i, v in enumerate(order)}
            gamma = tuple(self.best_order[position[v]] for v in range(self.g.n))
            if any(gamma[v] != v for v in range(self.g.n)):
                self.generators.append(gamma)


def canonical_labeling(
    g: Graph,
    partition: Optional[Sequence[Sequence[int]]] = None,
) -> Tuple[CanonicalForm, List[int]]:
    """
    计算规范标号

    Args:
        g: 图
        partition: 可选的初始有序划分 (顶点着色)，各格的顺序是颜色的一部分

    Returns:
        (CanonicalForm, perm): perm[v] 为顶点 v 的规范位置
    """
    if partition is None:
        cells: Cells = [list(range(g.n))]
        sizes: List[int] = []
    else:
        cells = [sorted(cell) for cell in partition if cell]
        if sorted(v for cell in cells for v in cell) != list(range(g.n)):
            raise GraphDomainError("初始划分必须恰好覆盖全部顶点")
        sizes = [len(cell) for cell in cells]

    search = _LabelSearch(g)
    search.run(cells, [])

    order = search.best_order
    perm = [0] * g.n
    for pos, v in enumerate(order):
        perm[v] = pos

    nbits = g.n * (g.n - 1) // 2
    body = search.best_key.to_bytes((nbits + 7) // 8, "big") if nbits else b""
    header = bytes([g.n]) + (bytes([len(sizes)] + sizes) if sizes else b"")
    logger.debug(f"规范标号: n={g.n}, 叶子数={search.leaves}, 自同构生成元={len(search.generators)}")
    return CanonicalForm(header + body), perm


def canonical_form(g: Graph) -> CanonicalForm:
    return canonical_labeling(g)[0]


def canonical_graph(g: Graph) -> Tuple[CanonicalForm, Graph]:
    """返回规范形式及按规范标号重排后的代表图"""
    form, perm = canonical_labeling(g)
    return form, relabel(g, perm)


def graph_from_form(form: CanonicalForm) -> Graph:
    """由无着色的规范形式还原规范代表图"""
    n = form.data[0]
    nbits = n * (n - 1) // 2
    body = form.data[1:]
    if len(body) != (nbits + 7) // 8:
        raise GraphDomainError(f"规范形式长度不符 (n={n})，着色形式无法还原")
    key = int.from_bytes(body, "big")
    edges = []
    k = nbits - 1
    for j in range(1, n):
        for i in range(j):
            if key >> k & 1:
                edges.append((i, j))
            k -= 1
    return build_graph(n, edges)


def is_isomorphic(g: Graph, h: Graph) -> bool:
    if g.n != h.n or g.m != h.m:
        return False
    if sorted(g.degrees()) != sorted(h.degrees()):
        return False
    return canonical_form(g) == canonical_form(h)

