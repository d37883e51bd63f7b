"""
测试用的小图
"""

from core.graph import Graph, build_graph


def path_graph(n: int) -> Graph:
    return build_graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return build_graph(n, [(i, (i + 1) % n) for i in range(n)])


def star_graph(leaves: int) -> Graph:
    """K_{1,leaves}，中心为 0"""
    return build_graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])
