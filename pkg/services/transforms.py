"""
图变换与谱单调性检查

- 边旋转: 删除 v-w、添加 u-w (w ∈ moved)，x_u >= x_v 时 Q-index 严格增大
- 删边单调性: 连通图删去一条边后 Q-index 严格减小
- 随机化性质试验 (固定种子可复现)
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional

import numpy as np

from core.errors import DisconnectedGraphError, GraphDomainError
from core.graph import Edge, Graph, VertexSet, build_graph, is_connected
from core.graph6 import graph6_encode
from services.spectral import DEFAULT_TOL, SpectralResult, perron_hypothesis, q_index, q_index_components
from utils.bits import iter_bits

logger = logging.getLogger(__name__)

STRICT_MARGIN = 1e-9
HYPOTHESIS_TOL = 1e-12


@dataclass(frozen=True)
class RotationSpec:
    """把 v 的邻居 moved 转接到 u 上"""
    u: int
    v: int
    moved: VertexSet = field(default_factory=lambda: VertexSet(0))


class RotationOutcome(Enum):
    INCREASE_CONFIRMED = "increase_confirmed"
    HYPOTHESIS_NOT_MET = "hypothesis_not_met"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class RotationCheck:
    """旋转检查的完整记录"""
    outcome: RotationOutcome
    x_u: float
    x_v: float
    q_before: float
    q_after: Optional[float] = None

    @property
    def delta(self) -> Optional[float]:
        if self.q_after is None:
            return None
        return self.q_after - self.q_before


def _validate_rotation(g: Graph, spec: RotationSpec):
    for name, x in (("u", spec.u), ("v", spec.v)):
        if not 0 <= x < g.n:
            raise GraphDomainError(f"{name}={x} 超出范围 [0, {g.n})")
    if spec.u == spec.v:
        raise GraphDomainError(f"u 与 v 必须不同，实际都是 {spec.u}")
    for w in spec.moved:
        if w == spec.u:
            raise GraphDomainError(f"moved 不能包含 u ({w})")
        if w == spec.v:
            raise GraphDomainError(f"moved 不能包含 v ({w})")
        if not 0 <= w < g.n:
            raise GraphDomainError(f"moved 中的顶点 {w} 超出范围")
        if not g.has_edge(spec.v, w):
            raise GraphDomainError(f"顶点 {w} 不是 v={spec.v} 的邻居")
        if g.has_edge(spec.u, w):
            raise GraphDomainError(f"顶点 {w} 已经是 u={spec.u} 的邻居")


def rotate_edges(g: Graph, spec: RotationSpec) -> Graph:
    """
    边旋转

    删除 {v·w}，添加 {u·w}，顶点数与边数都不变
    """
    _validate_rotation(g, spec)
    rotated = g
    for w in spec.moved:
        rotated = rotated.remove_edge(spec.v, w).add_edge(spec.u, w)
    return rotated


def inverse_spec(spec: RotationSpec) -> RotationSpec:
    """逆旋转: 把 moved 从 u 转回 v"""
    return RotationSpec(u=spec.v, v=spec.u, moved=spec.moved)


def rotation_report(
    g: Graph,
    spec: RotationSpec,
    tol: float = DEFAULT_TOL,
    hypothesis_tol: float = HYPOTHESIS_TOL,
    margin: float = STRICT_MARGIN,
    before: Optional[SpectralResult] = None,
) -> RotationCheck:
    """计算 Perron 向量并比较旋转前后的 Q-index (before 可复用已算好的结果)"""
    if not is_connected(g):
        raise DisconnectedGraphError("旋转检查需要连通图")
    rotated = rotate_edges(g, spec)
    if before is None:
        before = q_index(g, tol)
    x_u, x_v = before.perron[spec.u], before.perron[spec.v]
    if not perron_hypothesis(before, spec.u, spec.v, hypothesis_tol):
        return RotationCheck(
            outcome=RotationOutcome.HYPOTHESIS_NOT_MET,
            x_u=x_u,
            x_v=x_v,
            q_before=before.q1,
        )

    # 旋转后 v 可能成为孤立点
    after = q_index_components(rotated, tol)
    outcome = RotationOutcome.INCREASE_CONFIRMED if after > before.q1 + margin else RotationOutcome.INCONCLUSIVE
    return RotationCheck(outcome=outcome, x_u=x_u, x_v=x_v, q_before=before.q1, q_after=after)


def check_rotation_lemma(
    g: Graph,
    spec: RotationSpec,
    tol: float = DEFAULT_TOL,
    hypothesis_tol: float = HYPOTHESIS_TOL,
    margin: float = STRICT_MARGIN,
) -> RotationOutcome:
    return rotation_report(g, spec, tol, hypothesis_tol, margin).outcome


def check_monotonicity(
    g: Graph,
    e: Edge,
    tol: float = DEFAULT_TOL,
    margin: float = STRICT_MARGIN,
) -> bool:
    """q1(G - e) < q1(G) - margin；删边后必须仍然连通"""
    u, v = e
    if not is_connected(g):
        raise DisconnectedGraphError("单调性检查需要连通图")
    if not g.has_edge(u, v):
        raise GraphDomainError(f"边 ({u}, {v}) 不在图中")
    smaller = g.remove_edge(u, v)
    if not is_connected(smaller):
        raise DisconnectedGraphError(f"删除边 ({u}, {v}) 后图不连通，请换一条边")
    return q_index(smaller, tol).q1 < q_index(g, tol).q1 - margin


def random_connected_graph(n: int, rng: np.random.Generator, p: float = 0.4) -> Graph:
    """随机生成树再以概率 p 补边，结果必然连通"""
    if n < 1:
        raise GraphDomainError(f"n 必须 >= 1，实际 {n}")
    edges = {(int(rng.integers(0, v)), v) for v in range(1, n)}
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                edges.add((i, j))
    return build_graph(n, sorted(edges))


@dataclass
class TrialSummary:
    """随机化性质试验的汇总"""
    name: str
    trials: int
    seed: int
    counts: Dict[str, int] = field(default_factory=dict)
    worst_margin: Optional[float] = None
    failures: List[str] = field(default_factory=list)
    attempts: int = 0

    @property
    def passed(self) -> bool:
        return not self.failures

    def tally(self, key: str):
        self.counts[key] = self.counts.get(key, 0) + 1

    def observe(self, margin: float):
        if self.worst_margin is None or margin < self.worst_margin:
            self.worst_margin = margin


def _sample_rotation(
    g: Graph,
    before: SpectralResult,
    rng: np.random.Generator,
    hypothesis_tol: float,
) -> Optional[RotationSpec]:
    """随机取一对顶点，按 Perron 分量排好使 x_u >= x_v，再从 N(v) \\ N[u] 中随机取 moved"""
    a, b = (int(x) for x in rng.choice(g.n, size=2, replace=False))
    u, v = (a, b) if perron_hypothesis(before, a, b, hypothesis_tol) else (b, a)
    candidates = [w for w in iter_bits(g.adj[v] & ~g.adj[u]) if w != u]
    if not candidates:
        return None
    picks = [w for w in candidates if rng.random() < 0.5] or [candidates[int(rng.integers(0, len(candidates)))]]
    return RotationSpec(u=u, v=v, moved=VertexSet.of(picks))


def run_rotation_trials(
    trials: int,
    seed: int,
    max_order: int = 8,
    tol: float = DEFAULT_TOL,
    hypothesis_tol: float = HYPOTHESIS_TOL,
    margin: float = STRICT_MARGIN,
    max_attempts: Optional[int] = None,
) -> TrialSummary:
    """
    随机旋转试验

    重复采样直到凑满 trials 次满足 x_u >= x_v 且 moved 非空的旋转；
    每一次都必须 q_after > q_before + margin，落在 margin 内同样算失败

    Args:
        trials: 需要的有效试验次数
        seed: 随机种子
        max_order: 随机图的最大阶数
        max_attempts: 采样次数上限，默认 50 * trials
    """
    rng = np.random.default_rng(seed)
    summary = TrialSummary(name="rotation", trials=trials, seed=seed)
    budget = max_attempts if max_attempts is not None else 50 * trials
    accepted = 0
    while accepted < trials:
        if summary.attempts >= budget:
            summary.failures.append(f"采样 {budget} 次后只有 {accepted} 次满足前提")
            break
        summary.attempts += 1
        n = int(rng.integers(3, max_order + 1))
        g = random_connected_graph(n, rng)
        before = q_index(g, tol)
        spec = _sample_rotation(g, before, rng, hypothesis_tol)
        if spec is None:
            summary.tally("resampled")
            continue
        check = rotation_report(g, spec, tol, hypothesis_tol, margin, before=before)
        if check.outcome is RotationOutcome.HYPOTHESIS_NOT_MET:
            summary.tally("resampled")
            continue
        accepted += 1
        summary.tally(check.outcome.value)
        summary.observe(check.delta)
        if check.outcome is not RotationOutcome.INCREASE_CONFIRMED:
            summary.failures.append(
                f"{graph6_encode(g)} u={spec.u} v={spec.v} moved={spec.moved.to_list()} "
                f"q: {check.q_before:.12g} -> {check.q_after:.12g}"
            )
    logger.info(
        f"旋转试验: 有效 {accepted}/{trials} 次 (采样 {summary.attempts} 次), "
        f"统计 {summary.counts}, 失败 {len(summary.failures)}"
    )
    return summary


def run_monotonicity_trials(
    trials: int,
    seed: int,
    max_order: int = 8,
    tol: float = DEFAULT_TOL,
    margin: float = STRICT_MARGIN,
) -> TrialSummary:
    """随机删边试验: 删去一条非桥边后 Q-index 必须严格减小"""
    rng = np.random.default_rng(seed)
    summary = TrialSummary(name="monotonicity", trials=trials, seed=seed)
    for _ in range(trials):
        n = int(rng.integers(3, max_order + 1))
        g = random_connected_graph(n, rng)
        safe = [e for e in g.edges() if is_connected(g.remove_edge(*e))]
        if not safe:
            summary.tally("tree")
            continue
        e = safe[int(rng.integers(0, len(safe)))]
        drop = q_index(g, tol).q1 - q_index(g.remove_edge(*e), tol).q1
        summary.observe(drop)
        if drop > margin:
            summary.tally("decrease_confirmed")
        else:
            summary.tally("failed")
            summary.failures.append(f"{graph6_encode(g)} edge={e} drop={drop:.3e}")
    logger.info(f"删边试验: {trials} 次, 统计 {summary.counts}, 失败 {len(summary.failures)}")
    return summary


def rotation_summary(spec: RotationSpec) -> Dict[str, object]:
    return {"u": spec.u, "v": spec.v, "moved": spec.moved.to_list()}
