"""
审计套件

- lemma_suite: 极图的界与结构断言 (逐个阶数)
- bound_suite: 2Δ 界与 Merris 界及其取等情形
- minor_equivalence_suite: 连通边界扫描与分支集预言机的一致性
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Sequence

from core.assertion import Assertion, check
from core.errors import CapacityError, GraphDomainError
from core.graph import is_regular
from core.graph6 import graph6_encode
from families.constructors import odd_case_family, subdivided_clique
from search.enumerator import enumerate_connected
from search.extremal import SearchConfig, StructuralAudit, extremal_search
from services.minor import ORACLE_CAP, UNRESTRICTED_ORACLE_CAP, branch_set_oracle, has_k1t_minor
from services.spectral import (
    DEFAULT_TOL,
    a1_penalty,
    degree_bound,
    eq4_c,
    is_semiregular_bipartite,
    lemma31_bounds,
    lemma31_sign_closed_form,
    lemma31_sign_value,
    lemma31_threshold,
    merris_bound,
    q_index,
)
from services.transforms import STRICT_MARGIN
from storage.qindex_cache import QIndexCache

logger = logging.getLogger(__name__)

BOUND_SLACK = 1e-9
EQUALITY_TOL = 1e-8
EQ4_GRID_POINTS = 100


@dataclass
class AuditRecord:
    """一组断言及其汇总"""
    name: str
    params: Dict[str, Any] = field(default_factory=dict)
    assertions: List[Assertion] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(a.passed for a in self.assertions)

    @property
    def failed(self) -> List[str]:
        return [a.name for a in self.assertions if not a.passed]

    def add(self, assertion: Assertion):
        self.assertions.append(assertion)


def _odd_a1_values(t: int) -> List[int]:
    return list(range(2, t - 1, 2))


def _structure_checks(record: AuditRecord, prefix: str, audit: StructuralAudit, n: int, t: int):
    record.add(check(f"{prefix}:max_degree", audit.max_degree == t - 1, expected=t - 1, observed=audit.max_degree))
    record.add(check(f"{prefix}:a_size", len(audit.a_set) == t - 1, expected=t - 1, observed=len(audit.a_set)))

    a0_bad = [v for v in audit.a0 if audit.d_b[v] != 0]
    record.add(check(f"{prefix}:a0_d_b_zero", not a0_bad, expected=[], observed=a0_bad))
    a1_bad = [v for v in audit.a1 if audit.d_b[v] > 1]
    record.add(check(f"{prefix}:a1_d_b_at_most_1", not a1_bad, expected=[], observed=a1_bad))
    b_bad = [w for w in audit.b_set if audit.d_b[w] > 2]
    record.add(check(f"{prefix}:b_d_b_at_most_2", not b_bad, expected=[], observed=b_bad))
    n2_bad = [w for w in audit.second_neighbors if audit.d_b[w] > 1]
    record.add(check(f"{prefix}:second_neighbors_d_b_at_most_1", not n2_bad, expected=[], observed=n2_bad))

    if n == t + 1:
        nbrs = sorted(v for v in audit.a_set if audit.d_b[v] == 1)
        record.add(check(f"{prefix}:w_neighbors_equal_a1", nbrs == sorted(audit.a1), expected=sorted(audit.a1), observed=nbrs))
        a1_da = sorted({audit.d_a[v] for v in audit.a1})
        record.add(check(f"{prefix}:a1_d_a_equal_t_minus_3", a1_da in ([], [t - 3]), expected=[t - 3], observed=a1_da))
    else:
        sizes = (len(audit.a1), len(audit.second_neighbors))
        record.add(check(
            f"{prefix}:a1_covers_second_neighbors",
            sizes[0] >= sizes[1] >= 2,
            expected="|A1| >= |N2(u*)| >= 2",
            observed=list(sizes),
        ))
        a1_not_one = [v for v in audit.a1 if audit.d_b[v] != 1]
        record.add(check(f"{prefix}:a1_d_b_equal_1", not a1_not_one, expected=[], observed=a1_not_one))


def eq4_decrease_check(t: int, a1: int, points: int = EQ4_GRID_POINTS) -> Assertion:
    """c(q) 在 (2t-3, 2t-2] 的等距网格上严格递减"""
    grid = [2 * t - 3 + (i + 1) / points for i in range(points)]
    values = [eq4_c(t, a1, q) for q in grid]
    worst = max(b - a for a, b in zip(values, values[1:]))
    return check(f"t={t}:a1={a1}:eq4_decreasing", worst < 0, expected="< 0", observed=worst)


def _odd_case_checks(record: AuditRecord, t: int, tol: float, margin: float):
    """n = t+1 为奇数时: c(q) 递减、f 递减、Q-index 随 a1 递增"""
    a1_values = _odd_a1_values(t)
    for a1 in a1_values:
        record.add(eq4_decrease_check(t, a1))

    penalties = [a1_penalty(t, x) for x in range(2, t - 1)]
    worst = max((b - a for a, b in zip(penalties, penalties[1:])), default=-1.0)
    record.add(check(f"t={t}:a1_penalty_decreasing", worst < 0, expected="< 0", observed=worst))

    q_values = [q_index(odd_case_family(t, a1), tol).q1 for a1 in a1_values]
    steps = [b - a for a, b in zip(q_values, q_values[1:])]
    smallest = min(steps) if steps else None
    record.add(check(
        f"t={t}:odd_family_q_increasing_in_a1",
        smallest is None or smallest > margin,
        expected=f"> {margin}",
        observed=smallest,
        margin=margin,
    ))


def lemma_suite(
    t: int,
    orders: Iterable[int],
    tol: float = DEFAULT_TOL,
    gap: float = 1e-6,
    margin: float = STRICT_MARGIN,
    worker_count: int = 1,
    cache: Optional[QIndexCache] = None,
) -> AuditRecord:
    """
    对每个阶数 n 检查极图的界与结构

    Args:
        t: 3..7
        orders: 阶数列表 (每个 >= t+1 且 <= 10)
        tol: 特征值容忍度
        gap: 唯一性余量
        margin: 严格不等式余量

    Returns:
        AuditRecord
    """
    if not 3 <= t <= 7:
        raise GraphDomainError(f"lemma_suite 需要 t 在 3..7，实际 {t}")
    orders = sorted(set(orders))
    record = AuditRecord(name="lemma_suite", params={"t": t, "orders": orders})

    sign = lemma31_sign_value(t)
    closed = lemma31_sign_closed_form(t)
    record.add(check(f"t={t}:sign_check_negative", sign < 0, expected="< 0", observed=sign))
    record.add(check(
        f"t={t}:sign_check_closed_form",
        abs(sign - closed) < EQUALITY_TOL,
        expected=closed,
        observed=sign,
        margin=EQUALITY_TOL,
    ))

    for n in orders:
        config = SearchConfig(n=n, t=t, tol=tol, gap=gap, worker_count=worker_count, include_disconnected=False)
        report = extremal_search(config, cache)
        q_star = report.q_star
        lower, upper = lemma31_bounds(t, n)
        prefix = f"n={n}"
        record.add(check(f"{prefix}:q_star_above_lower", q_star > lower + margin, expected=f"> {lower}", observed=q_star, margin=margin))
        record.add(check(f"{prefix}:q_star_at_most_upper", q_star <= upper + margin, expected=f"<= {upper}", observed=q_star, margin=margin))
        _structure_checks(record, prefix, report.structural, n, t)

        if n >= t + 2:
            q_sk = q_index(subdivided_clique(n, t), tol).q1
            threshold = lemma31_threshold(t)
            record.add(check(f"{prefix}:subdivided_clique_above_threshold", q_sk > threshold + margin, expected=f"> {threshold}", observed=q_sk, margin=margin))

        if n == t + 1 and n % 2 == 1:
            _odd_case_checks(record, t, tol, margin)

    logger.info(f"lemma_suite t={t}: {len(record.assertions)} 条断言, 失败 {record.failed}")
    return record


def bound_suite(max_order: int, tol: float = DEFAULT_TOL, min_order: int = 2) -> AuditRecord:
    """
    遍历 n <= max_order 的全部连通图

    q1 <= min(2Δ, Merris) + 1e-9；2Δ 取等当且仅当正则；
    Merris 取等当且仅当正则或半正则二部
    """
    record = AuditRecord(name="bound_suite", params={"max_order": max_order})
    for n in range(min_order, max_order + 1):
        count = 0
        above: List[str] = []
        degree_mismatch: List[str] = []
        merris_mismatch: List[str] = []
        for g in enumerate_connected(n):
            count += 1
            q1 = q_index(g, tol).q1
            db, mb = degree_bound(g), merris_bound(g)
            if q1 > min(db, mb) + BOUND_SLACK:
                above.append(graph6_encode(g))
            if (abs(q1 - db) < EQUALITY_TOL) != is_regular(g):
                degree_mismatch.append(graph6_encode(g))
            if (abs(q1 - mb) < EQUALITY_TOL) != (is_regular(g) or is_semiregular_bipartite(g)):
                merris_mismatch.append(graph6_encode(g))
        prefix = f"n={n}"
        record.add(check(f"{prefix}:q1_below_bounds", not above, expected=0, observed=len(above), margin=BOUND_SLACK))
        record.add(check(f"{prefix}:degree_bound_equality_iff_regular", not degree_mismatch, expected=0, observed=len(degree_mismatch), margin=EQUALITY_TOL))
        record.add(check(
            f"{prefix}:merris_equality_iff_regular_or_semiregular_bipartite",
            not merris_mismatch,
            expected=0,
            observed=len(merris_mismatch),
            margin=EQUALITY_TOL,
        ))
        record.params[f"graphs_n{n}"] = count
        logger.debug(f"bound_suite n={n}: {count} 个图")
    return record


def minor_equivalence_suite(
    max_order: int,
    ts: Sequence[int] = (3, 4, 5),
    unrestricted_max_order: int = UNRESTRICTED_ORACLE_CAP,
    oracle_cap: int = ORACLE_CAP,
) -> AuditRecord:
    """
    has_k1t_minor 与 branch_set_oracle 的一致性

    unrestricted_max_order 以内同时检查叶分支集取单点不失一般性
    """
    if max_order > oracle_cap:
        raise CapacityError(f"预言机比对最多到 {oracle_cap} 阶，实际 {max_order}", hint="调大 search.oracle_cap")
    unrestricted_max_order = min(unrestricted_max_order, UNRESTRICTED_ORACLE_CAP)
    record = AuditRecord(
        name="minor_equivalence_suite",
        params={"max_order": max_order, "ts": list(ts), "unrestricted_max_order": unrestricted_max_order},
    )
    for n in range(1, max_order + 1):
        graphs = list(enumerate_connected(n))
        for t in ts:
            disagreements = [
                graph6_encode(g) for g in graphs
                if has_k1t_minor(g, t).present != branch_set_oracle(g, t, cap=oracle_cap)
            ]
            record.add(check(f"n={n}:t={t}:scan_matches_oracle", not disagreements, expected=0, observed=len(disagreements)))
            if n <= unrestricted_max_order:
                reduction = [
                    graph6_encode(g) for g in graphs
                    if branch_set_oracle(g, t, cap=oracle_cap) != branch_set_oracle(g, t, unrestricted=True)
                ]
                record.add(check(f"n={n}:t={t}:singleton_leaves_suffice", not reduction, expected=0, observed=len(reduction)))
    return record
