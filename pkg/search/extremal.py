"""
极值搜索

流程: 规范扩张枚举 (Δ <= t-1 剪枝) -> K_{1,t} 子式过滤 -> Q-index -> 取最大类。
最后一层的扩张与特征值计算按父图分片交给进程池，合并后按规范形式排序，
因此报告与进程数无关。
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import repeat
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from config.settings import AppConfig
from core.assertion import Assertion, check
from core.canonical import CanonicalForm, canonical_form
from core.errors import CapacityError, GraphDomainError, InternalInvariantError
from core.graph import Graph, max_degree
from core.graph6 import graph6_encode
from families.constructors import complete, literal_statement_graph, predicted_extremal
from search.enumerator import ENUMERATION_CAP, Level, enumerate_level, expand_parent
from services.minor import has_k1t_minor
from services.spectral import DEFAULT_MAX_ITERATIONS, DEFAULT_TOL, q_index
from storage.qindex_cache import QIndexCache
from utils.bits import iter_bits, popcount

logger = logging.getLogger(__name__)

PERRON_TIE_TOL = 1e-9


@dataclass(frozen=True)
class SearchConfig:
    """搜索参数"""
    n: int
    t: int
    tol: float = DEFAULT_TOL
    gap: float = 1e-6
    worker_count: int = 1
    max_iterations: int = DEFAULT_MAX_ITERATIONS
    include_disconnected: bool = True
    max_order: int = ENUMERATION_CAP

    def __post_init__(self):
        if self.t < 3:
            raise GraphDomainError(f"t 必须 >= 3，实际 {self.t}")
        cap = min(self.max_order, ENUMERATION_CAP)
        if self.n > cap:
            raise CapacityError(
                f"搜索阶数上限为 {cap}，实际 n={self.n}",
                hint=f"search.max_order 可在 1..{ENUMERATION_CAP} 内调整，n > {ENUMERATION_CAP} 的穷举超出桌面规模",
            )
        if self.n < self.t + 1:
            raise GraphDomainError(f"需要 n >= t+1，实际 n={self.n}, t={self.t}")
        if self.tol <= 0:
            raise GraphDomainError(f"tol 必须为正，实际 {self.tol}")
        if self.gap < 10 * self.tol:
            raise GraphDomainError(f"gap 必须 >= 10·tol，实际 gap={self.gap}, tol={self.tol}")
        if self.worker_count < 1:
            raise GraphDomainError(f"worker_count 必须 >= 1，实际 {self.worker_count}")

    @classmethod
    def from_settings(cls, n: int, t: int, config: AppConfig, **overrides) -> "SearchConfig":
        values = {
            "tol": config.spectral.tol,
            "gap": config.search.gap,
            "worker_count": config.search.workers,
            "max_iterations": config.spectral.max_iterations,
            "include_disconnected": config.search.include_disconnected,
            "max_order": config.search.max_order,
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(n=n, t=t, **values)

    def echo(self) -> Dict[str, Any]:
        """报告中回显的参数 (不含进程数，报告与并行度无关)"""
        return {"n": self.n, "t": self.t, "tol": self.tol, "gap": self.gap}


@dataclass(frozen=True)
class ExtremalEntry:
    form: CanonicalForm
    graph6: str
    q1: float

    def to_dict(self) -> Dict[str, Any]:
        return {"canonical": self.form.hex(), "graph6": self.graph6, "q1": self.q1}


@dataclass
class StructuralAudit:
    """
    以 Perron 分量最大的顶点 u* 为中心的结构记录

    A = N(u*)，B = 其余顶点 (不含 u*)；A_0 为 A 中 d_A = t-2 的顶点，A_1 = A \\ A_0
    """
    u_star: int
    max_degree: int
    a_set: List[int]
    b_set: List[int]
    a0: List[int]
    a1: List[int]
    second_neighbors: List[int]
    d_a: Dict[int, int]
    d_b: Dict[int, int]

    def census(self) -> Dict[str, Dict[int, int]]:
        """A 与 B 两侧的 d_B 分布"""
        result: Dict[str, Dict[int, int]] = {}
        for side, members in (("A", self.a_set), ("B", self.b_set)):
            counts: Dict[int, int] = {}
            for v in members:
                counts[self.d_b[v]] = counts.get(self.d_b[v], 0) + 1
            result[side] = dict(sorted(counts.items()))
        return result

    def to_dict(self) -> Dict[str, Any]:
        return {
            "u_star": self.u_star,
            "max_degree": self.max_degree,
            "a_size": len(self.a_set),
            "a0_size": len(self.a0),
            "a1_size": len(self.a1),
            "second_neighbors": len(self.second_neighbors),
            "d_b_census": {side: {str(k): v for k, v in c.items()} for side, c in self.census().items()},
        }


def structural_audit(g: Graph, t: int, tol: float = DEFAULT_TOL) -> StructuralAudit:
    perron = q_index(g, tol).perron
    top = max(perron)
    u_star = next(v for v in range(g.n) if perron[v] >= top - PERRON_TIE_TOL)
    a_mask = g.adj[u_star]
    b_mask = g.vertex_mask & ~a_mask & ~(1 << u_star)
    others = [v for v in range(g.n) if v != u_star]
    d_a = {v: popcount(g.adj[v] & a_mask) for v in others}
    d_b = {v: popcount(g.adj[v] & b_mask) for v in others}
    a_set = list(iter_bits(a_mask))
    second = [w for w in iter_bits(b_mask) if g.adj[w] & a_mask]
    return StructuralAudit(
        u_star=u_star,
        max_degree=max_degree(g),
        a_set=a_set,
        b_set=list(iter_bits(b_mask)),
        a0=[v for v in a_set if d_a[v] == t - 2],
        a1=[v for v in a_set if d_a[v] != t - 2],
        second_neighbors=second,
        d_a=d_a,
        d_b=d_b,
    )


@dataclass
class SearchReport:
    """一次 (n, t) 搜索的完整结果"""
    config: SearchConfig
    candidates_scanned: int
    survivors: int
    extremal: List[ExtremalEntry]
    runner_up_q1: Optional[float]
    predicted: str
    prediction_name: str
    matches_prediction: bool
    unique: bool
    structural: StructuralAudit
    best_disconnected_q1: Optional[float] = None

    @property
    def q_star(self) -> float:
        return self.extremal[0].q1

    def to_dict(self) -> Dict[str, Any]:
        return {
            "config": self.config.echo(),
            "candidates_scanned": self.candidates_scanned,
            "survivors": self.survivors,
            "extremal": [e.to_dict() for e in self.extremal],
            "runner_up_q1": self.runner_up_q1,
            "predicted": self.predicted,
            "prediction_name": self.prediction_name,
            "matches_prediction": self.matches_prediction,
            "unique": self.unique,
            "structural": self.structural.to_dict(),
            "best_disconnected_q1": self.best_disconnected_q1,
        }


@dataclass
class TheoremVerdict:
    passed: bool
    report: SearchReport
    assertions: List[Assertion] = field(default_factory=list)


def _expand_shard(parents: Level, max_deg: int, t: int) -> Tuple[int, Level]:
    """进程池任务: 扩张一批父图并过滤含子式的子图"""
    scanned = 0
    survivors: Level = []
    for parent_form, parent in parents:
        for form, child in expand_parent(parent_form, parent, max_deg):
            scanned += 1
            if not has_k1t_minor(child, t).present:
                survivors.append((form, child))
    return scanned, survivors


def _q_shard(graphs: List[Graph], tol: float, max_iterations: int) -> List[float]:
    return [q_index(g, tol, max_iterations).q1 for g in graphs]


def _run_sharded(fn: Callable, items: Sequence, workers: int, *args) -> List[Any]:
    """按轮转方式分片；单进程时直接调用"""
    shards = [list(items[i::workers]) for i in range(workers)]
    if workers == 1:
        return [fn(shards[0], *args)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, shards, *(repeat(a) for a in args)))


def minor_free_family(n: int, t: int, workers: int = 1) -> Tuple[int, Level]:
    """
    n 阶连通 K_{1,t}-minor free 图全集

    Returns:
        (candidates_scanned, family): family 按规范形式升序
    """
    max_deg = t - 1
    if n == 1:
        level = enumerate_level(1, max_deg)
        return len(level), level
    parents = enumerate_level(n - 1, max_deg)
    scanned = 0
    family: Level = []
    for part_scanned, part in _run_sharded(_expand_shard, parents, workers, max_deg, t):
        scanned += part_scanned
        family.extend(part)
    family.sort(key=lambda item: item[0])
    return scanned, family


def _q_values(family: Level, config: SearchConfig, cache: Optional[QIndexCache]) -> List[float]:
    values: List[Optional[float]] = [None] * len(family)
    missing: List[int] = []
    for i, (form, _) in enumerate(family):
        cached = cache.get(form, config.tol) if cache is not None else None
        if cached is None:
            missing.append(i)
        else:
            values[i] = cached

    graphs = [family[i][1] for i in missing]
    workers = min(config.worker_count, max(1, len(graphs)))
    # 分片是轮转的，按同样的方式还原顺序
    for shard_index, shard_values in enumerate(
        _run_sharded(_q_shard, graphs, workers, config.tol, config.max_iterations)
    ):
        for j, q1 in enumerate(shard_values):
            i = missing[shard_index + j * workers]
            values[i] = q1
            if cache is not None:
                cache.put(family[i][0], q1, config.tol)
    return values


def best_disconnected_q1(n: int, t: int, config: SearchConfig, cache: Optional[QIndexCache] = None) -> float:
    """
    最佳不连通对手的 Q-index

    不连通图的 Q-index 是各分量的最大值，其余顶点取孤立点即可；
    k <= t 阶时 K_k 本身不含子式，更高阶取 k 阶连通族的最大值
    """
    k_small = min(t, n - 1)
    best = q_index(complete(k_small), config.tol, config.max_iterations).q1 if k_small > 1 else 0.0
    for k in range(t + 1, n):
        _, family = minor_free_family(k, t, config.worker_count)
        best = max([best] + _q_values(family, config, cache))
    return best


def literal_prediction(n: int, t: int) -> Graph:
    """按定理陈述字面理解的极图: n = t+1 时为 K_n 删去 floor(n/2) 条独立边"""
    if n == t + 1:
        return literal_statement_graph(n)
    return predicted_extremal(n, t)


def extremal_search(
    config: SearchConfig,
    cache: Optional[QIndexCache] = None,
    prediction: Optional[Graph] = None,
    prediction_name: str = "proof",
) -> SearchReport:
    """
    在 n 阶连通 K_{1,t}-minor free 图中求 Q-index 最大者

    Args:
        config: 搜索参数
        cache: 可选的 Q-index 缓存
        prediction: 用于比对的预测图，默认取证明给出的极图
        prediction_name: 预测的名称 (写入报告)

    Returns:
        SearchReport
    """
    n, t = config.n, config.t
    logger.info(f"开始搜索: n={n}, t={t}, workers={config.worker_count}")
    scanned, family = minor_free_family(n, t, config.worker_count)
    if not family:
        raise InternalInvariantError(f"n={n}, t={t} 的无子式族为空 (路径必然存在)")

    values = _q_values(family, config, cache)
    q_max = max(values)
    extremal = [
        ExtremalEntry(form=form, graph6=graph6_encode(g), q1=q1)
        for (form, g), q1 in zip(family, values)
        if q1 >= q_max - config.gap
    ]
    rest = [q1 for q1 in values if q1 < q_max - config.gap]
    runner_up = max(rest) if rest else None

    if prediction is None:
        prediction = predicted_extremal(n, t)
    predicted_form = canonical_form(prediction)
    best_graph = next(g for (form, g) in family if form == extremal[0].form)

    report = SearchReport(
        config=config,
        candidates_scanned=scanned,
        survivors=len(family),
        extremal=extremal,
        runner_up_q1=runner_up,
        predicted=graph6_encode(prediction),
        prediction_name=prediction_name,
        matches_prediction=any(e.form == predicted_form for e in extremal),
        unique=len(extremal) == 1,
        structural=structural_audit(best_graph, t, config.tol),
        best_disconnected_q1=best_disconnected_q1(n, t, config, cache) if config.include_disconnected else None,
    )
    if cache is not None:
        logger.debug(f"缓存命中 {cache.hits}, 未命中 {cache.misses}")
    logger.info(
        f"搜索完成: n={n}, t={t}, 候选 {scanned}, 无子式 {len(family)}, "
        f"q*={q_max:.12g}, 极值类 {len(extremal)}"
    )
    return report


def verify_theorem(
    config: SearchConfig,
    prediction: Optional[Graph] = None,
    prediction_name: str = "proof",
    cache: Optional[QIndexCache] = None,
) -> TheoremVerdict:
    """
    验证极图唯一且与预测同构

    通过条件: 极值类唯一、与预测一致、次优者至少低 gap
    """
    report = extremal_search(config, cache, prediction, prediction_name)
    gap_observed = None if report.runner_up_q1 is None else report.q_star - report.runner_up_q1
    assertions = [
        check(
            "unique_extremal_class",
            report.unique,
            expected=1,
            observed=len(report.extremal),
        ),
        check(
            f"matches_prediction_{prediction_name}",
            report.matches_prediction,
            expected=report.predicted,
            observed=report.extremal[0].graph6,
        ),
        check(
            "runner_up_gap",
            gap_observed is None or gap_observed > config.gap,
            expected=f"> {config.gap}",
            observed=gap_observed,
            margin=config.gap,
        ),
    ]
    passed = all(a.passed for a in assertions)
    if not passed:
        failed = [a.name for a in assertions if not a.passed]
        logger.warning(f"定理验证失败: n={config.n}, t={config.t}, 预测={prediction_name}, 失败断言 {failed}")
    return TheoremVerdict(passed=passed, report=report, assertions=assertions)


def literal_statement_check(config: SearchConfig, cache: Optional[QIndexCache] = None) -> TheoremVerdict:
    """用定理陈述的字面预测做验证 (奇数 n = t+1 时预期失败)"""
    return verify_theorem(config, literal_prediction(config.n, config.t), "literal", cache)
