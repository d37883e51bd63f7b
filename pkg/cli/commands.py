"""
命令解析与执行

parse_args 在任何计算之前完成参数校验 (失败抛 UsageError，退出码 2)；
execute 分派到各模块并生成 Report (断言失败或容量超限退出码 1)
"""

from __future__ import annotations

import argparse
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from config.settings import AppConfig
from core.assertion import check
from core.canonical import canonical_graph
from core.errors import (
    CapacityError,
    GraphDomainError,
    InternalInvariantError,
    QExtremalError,
    UsageError,
)
from core.graph import Graph, VertexSet
from core.graph6 import graph6_decode, graph6_encode
from families.constructors import FAMILY_BUILDERS, FamilyParams, degree_census, family_by_name
from search.audit import lemma_suite
from search.extremal import SearchConfig, extremal_search, literal_prediction, literal_statement_check, verify_theorem
from services.minor import has_k1t_minor, verify_certificate
from services.spectral import q_index
from services.transforms import RotationSpec, inverse_spec, rotate_edges, rotation_report, rotation_summary
from storage.qindex_cache import QIndexCache
from cli.report import Report
from cli.selftest import run_selftest

logger = logging.getLogger(__name__)

VERBS = ("construct", "qindex", "minor-check", "rotate", "search", "verify-theorem", "lemma-suite", "selftest")
CACHED_VERBS = {"search", "verify-theorem", "lemma-suite", "selftest"}
BUG_MARKER = "BUG: 内部不变量被破坏，请附上本报告提交问题"


@dataclass
class Command:
    """校验过的命令"""
    verb: str
    params: Dict[str, Any] = field(default_factory=dict)
    output: Optional[str] = None
    format: str = "json"
    graph: Optional[Graph] = None
    cache_dir: Optional[str] = None
    config_file: Optional[str] = None
    log_level: Optional[str] = None


class _Parser(argparse.ArgumentParser):
    """把 argparse 的错误转成 UsageError，而不是直接退出"""

    def error(self, message: str):
        flag = next((tok for tok in message.replace(",", " ").split() if tok.startswith("--")), None)
        raise UsageError(message, flag=flag)


def _common_flags() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=["json", "table"], default=None, help="输出格式 (默认取配置)")
    common.add_argument("--output", default=None, help="报告输出路径 (默认标准输出)")
    common.add_argument("--cache", default=None, help="缓存目录 (QEXTREMAL_CACHE 优先)")
    common.add_argument("--config", default=None, help="配置文件路径")
    common.add_argument("--log-level", default=None, choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    common.add_argument("--tol", type=float, default=None, help="幂迭代残差容忍度")
    return common


def _family_flags(p: argparse.ArgumentParser, required: bool = False):
    p.add_argument("--family", choices=sorted(FAMILY_BUILDERS), required=required, help="图族名称")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--t", type=int, default=None)
    p.add_argument("--s", type=int, default=None)
    p.add_argument("--a1", type=int, default=None)


def _graph_source(p: argparse.ArgumentParser):
    p.add_argument("--g6", default=None, help="graph6 文本")
    _family_flags(p)


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    parser = _Parser(prog="qextremal", description="K_{1,t}-minor free 图的 Q-index 极值验证工具")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    _family_flags(sub.add_parser("construct", parents=[common], help="构造图族成员"), required=True)
    _graph_source(sub.add_parser("qindex", parents=[common], help="计算 Q-index"))
    _graph_source(sub.add_parser("minor-check", parents=[common], help="K_{1,t} 子式判定 (--t 为星的叶数)"))

    rotate = sub.add_parser("rotate", parents=[common], help="边旋转并检查 Q-index 增大")
    _graph_source(rotate)
    rotate.add_argument("--u", type=int, required=True)
    rotate.add_argument("--v", type=int, required=True)
    rotate.add_argument("--moved", default="", help="逗号分隔的顶点列表")

    for verb, help_text in (("search", "极值搜索"), ("verify-theorem", "验证极图")):
        p = sub.add_parser(verb, parents=[common], help=help_text)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--t", type=int, required=True)
        p.add_argument("--gap", type=float, default=None)
        p.add_argument("--workers", type=int, default=None)
        if verb == "verify-theorem":
            p.add_argument("--prediction", choices=["proof", "literal"], default="proof")

    suite = sub.add_parser("lemma-suite", parents=[common], help="逐阶审计引理断言 (阶数 t+1..n)")
    suite.add_argument("--t", type=int, required=True)
    suite.add_argument("--n", type=int, required=True, help="最大阶数")
    suite.add_argument("--gap", type=float, default=None)
    suite.add_argument("--workers", type=int, default=None)

    selftest = sub.add_parser("selftest", parents=[common], help="运行验收套件")
    selftest.add_argument("--trials", type=int, default=500)
    selftest.add_argument("--seed", type=int, default=0)
    selftest.add_argument("--quick", action="store_true")
    return parser


def _resolve_graph(args: argparse.Namespace) -> Graph:
    """--g6 与 --family 二选一"""
    g6 = getattr(args, "g6", None)
    if g6 is not None and args.family is not None:
        raise UsageError("--g6 与 --family 不能同时使用", flag="--g6")
    if g6 is not None:
        try:
            return graph6_decode(g6)
        except QExtremalError as e:
            raise UsageError(f"--g6 解析失败: {e}", flag="--g6")
    if args.family is None:
        raise UsageError("需要 --g6 或 --family", flag="--family")
    params = FamilyParams(t=args.t, n=args.n, s=args.s, a1=args.a1)
    try:
        return family_by_name(args.family, params)
    except GraphDomainError as e:
        raise UsageError(f"--family {args.family}: {e}", flag="--family")


def _parse_moved(text: str) -> List[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise UsageError(f"--moved 必须是逗号分隔的整数，实际 {text!r}", flag="--moved")


def _validate_search(args: argparse.Namespace):
    if args.t < 3:
        raise UsageError(f"--t 必须 >= 3，实际 {args.t}", flag="--t")
    if args.n < args.t + 1:
        raise UsageError(f"--n 必须 >= t+1，实际 n={args.n}, t={args.t}", flag="--n")
    if args.workers is not None and args.workers < 1:
        raise UsageError(f"--workers 必须 >= 1，实际 {args.workers}", flag="--workers")
    if args.gap is not None and args.gap <= 0:
        raise UsageError(f"--gap 必须为正，实际 {args.gap}", flag="--gap")
    if args.gap is not None and args.tol is not None and args.gap < 10 * args.tol:
        raise UsageError("--gap 必须 >= 10·tol", flag="--gap")


def parse_args(argv: Sequence[str]) -> Command:
    """
    解析并校验命令行

    Raises:
        UsageError: 未知动词/参数、冲突参数或参数值非法
    """
    args = build_parser().parse_args(list(argv))
    if args.tol is not None and args.tol <= 0:
        raise UsageError(f"--tol 必须为正，实际 {args.tol}", flag="--tol")

    params: Dict[str, Any] = {}
    graph = None
    verb = args.verb

    if verb in ("construct", "qindex", "minor-check", "rotate"):
        graph = _resolve_graph(args)
        params["graph6"] = graph6_encode(graph) if graph.n <= 62 else None
        if getattr(args, "family", None):
            params["family"] = args.family
            params.update({k: getattr(args, k) for k in ("n", "t", "s", "a1") if getattr(args, k) is not None})

    if verb == "minor-check":
        if args.t is None:
            raise UsageError("minor-check 需要 --t", flag="--t")
        if args.t < 1:
            raise UsageError(f"--t 必须 >= 1，实际 {args.t}", flag="--t")
        params["t"] = args.t

    if verb == "rotate":
        spec = RotationSpec(u=args.u, v=args.v, moved=VertexSet.of(_parse_moved(args.moved)))
        try:
            rotate_edges(graph, spec)
        except GraphDomainError as e:
            raise UsageError(f"旋转参数非法: {e}", flag="--moved")
        params.update(rotation_summary(spec))

    if verb in ("search", "verify-theorem"):
        _validate_search(args)
        params.update({"n": args.n, "t": args.t, "gap": args.gap, "workers": args.workers})
        if verb == "verify-theorem":
            params["prediction"] = args.prediction

    if verb == "lemma-suite":
        if not 3 <= args.t <= 7:
            raise UsageError(f"--t 必须在 3..7，实际 {args.t}", flag="--t")
        if args.n < args.t + 1:
            raise UsageError(f"--n 必须 >= t+1，实际 n={args.n}, t={args.t}", flag="--n")
        if args.workers is not None and args.workers < 1:
            raise UsageError(f"--workers 必须 >= 1，实际 {args.workers}", flag="--workers")
        params.update({"t": args.t, "n": args.n, "gap": args.gap, "workers": args.workers})

    if verb == "selftest":
        if args.trials < 1:
            raise UsageError(f"--trials 必须 >= 1，实际 {args.trials}", flag="--trials")
        params.update({"trials": args.trials, "seed": args.seed, "quick": args.quick})

    if args.tol is not None:
        params["tol"] = args.tol

    return Command(
        verb=verb,
        params=params,
        output=args.output,
        format=args.format,
        graph=graph,
        cache_dir=args.cache,
        config_file=args.config,
        log_level=args.log_level,
    )


def _echo(params: Dict[str, Any]) -> Dict[str, Any]:
    """回显参数: 去掉空值与 workers (报告与并行度无关)"""
    return {k: v for k, v in params.items() if v is not None and k != "workers"}


def _search_config(cmd: Command, config: AppConfig) -> SearchConfig:
    p = cmd.params
    return SearchConfig.from_settings(
        p["n"], p["t"], config,
        tol=p.get("tol"),
        gap=p.get("gap"),
        worker_count=p.get("workers"),
    )


def _run_construct(cmd: Command, config: AppConfig, cache: Optional[QIndexCache]) -> Tuple[Dict, List]:
    g = cmd.graph
    form, representative = canonical_graph(g)
    return {
        "graph6": graph6_encode(g),
        "n": g.n,
        "m": g.m,
        "canonical": form.hex(),
        "canonical_graph6": graph6_encode(representative),
        "degree_census": {str(k): v for k, v in degree_census(g).items()},
    }, []


def _run_qindex(cmd: Command, config: AppConfig, cache: Optional[QIndexCache]) -> Tuple[Dict, List]:
    tol = cmd.params.get("tol", config.spectral.tol)
    result = q_index(cmd.graph, tol, config.spectral.max_iterations)
    results = {
        "q1": result.q1,
        "residual": result.residual,
        "iterations": result.iterations,
        "perron": list(result.perron),
    }
    return results, [check("residual_below_tol", result.residual < tol, expected=f"< {tol}", observed=result.residual, margin=tol)]


def _run_minor_check(cmd: Command, config: AppConfig, cache: Optional[QIndexCache]) -> Tuple[Dict, List]:
    t = cmd.params["t"]
    cert = has_k1t_minor(cmd.graph, t, config.search.boundary_scan_cap)
    results = {"minor": cert.kind.value, "certificate": cert.to_dict()}
    return results, [check("certificate_valid", verify_certificate(cmd.graph, cert, config.search.oracle_cap), expected=True)]


def _run_rotate(cmd: Command, config: AppConfig, cache: Optional[QIndexCache]) -> Tuple[Dict, List]:
    g = cmd.graph
    spec = RotationSpec(u=cmd.params["u"], v=cmd.params["v"], moved=VertexSet.of(cmd.params["moved"]))
    rotated = rotate_edges(g, spec)
    report = rotation_report(
        g, spec,
        tol=cmd.params.get("tol", config.spectral.tol),
        hypothesis_tol=config.spectral.hypothesis_tol,
        margin=config.spectral.strict_margin,
    )
    restored = rotate_edges(rotated, inverse_spec(spec))
    results = {
        "rotated": graph6_encode(rotated),
        "outcome": report.outcome.value,
        "x_u": report.x_u,
        "x_v": report.x_v,
        "q_before": report.q_before,
        "q_after": report.q_after,
    }
    margin = config.spectral.strict_margin
    assertions = [
        check("edge_count_preserved", rotated.m == g.m, expected=g.m, observed=rotated.m),
        check("inverse_restores_graph", restored == g, expected=graph6_encode(g), observed=graph6_encode(restored)),
    ]
    if report.delta is not None:
        assertions.append(check("no_decrease_under_hypothesis", report.delta >= -margin, expected=f">= {-margin}", observed=report.delta, margin=margin))
    return results, assertions


def _run_search(cmd: Command, config: AppConfig, cache: Optional[QIndexCache]) -> Tuple[Dict, List]:
    report = extremal_search(_search_config(cmd, config), cache)
    return report.to_dict(), []


def _run_verify(cmd: Command, config: AppConfig, cache: Optional[QIndexCache]) -> Tuple[Dict, List]:
    sc = _search_config(cmd, config)
    if cmd.params.get("prediction") == "literal":
        verdict = verify_theorem(sc, literal_prediction(sc.n, sc.t), "literal", cache)
        return verdict.report.to_dict(), verdict.assertions

    verdict = verify_theorem(sc, cache=cache)
    results = verdict.report.to_dict()
    assertions = list(verdict.assertions)
    if sc.n == sc.t + 1 and sc.n % 2 == 1:
        literal = literal_statement_check(sc, cache)
        results["literal_statement"] = {
            "predicted": literal.report.predicted,
            "passed": literal.passed,
            "failed": [a.name for a in literal.assertions if not a.passed],
        }
        assertions.append(check("literal_statement_excluded", not literal.passed, expected=False, observed=literal.passed))
    return results, assertions


def _run_lemma_suite(cmd: Command, config: AppConfig, cache: Optional[QIndexCache]) -> Tuple[Dict, List]:
    p = cmd.params
    orders = list(range(p["t"] + 1, p["n"] + 1))
    record = lemma_suite(
        p["t"],
        orders,
        tol=p.get("tol", config.spectral.tol),
        gap=p.get("gap") or config.search.gap,
        margin=config.spectral.strict_margin,
        worker_count=p.get("workers") or config.search.workers,
        cache=cache,
    )
    return {"t": p["t"], "orders": orders, "assertion_count": len(record.assertions)}, record.assertions


def _run_selftest(cmd: Command, config: AppConfig, cache: Optional[QIndexCache]) -> Tuple[Dict, List]:
    p = cmd.params
    record = run_selftest(config, cache, trials=p["trials"], seed=p["seed"], quick=p["quick"])
    results = {"assertion_count": len(record.assertions), "failed": record.failed}
    results.update({k: v for k, v in record.params.items() if k.endswith("_counts")})
    return results, record.assertions


HANDLERS: Dict[str, Callable[[Command, AppConfig, Optional[QIndexCache]], Tuple[Dict, List]]] = {
    "construct": _run_construct,
    "qindex": _run_qindex,
    "minor-check": _run_minor_check,
    "rotate": _run_rotate,
    "search": _run_search,
    "verify-theorem": _run_verify,
    "lemma-suite": _run_lemma_suite,
    "selftest": _run_selftest,
}


def open_cache(cmd: Command, config: AppConfig) -> Optional[QIndexCache]:
    if cmd.verb not in CACHED_VERBS or not config.cache.enabled:
        return None
    return QIndexCache(config.cache.path, config.tool_version)


def execute(cmd: Command, config: AppConfig) -> Tuple[int, Report]:
    """
    执行命令

    Returns:
        (exit_code, report): 0 全部断言通过；1 断言失败、容量超限或计算错误
    """
    report = Report(tool_version=config.tool_version, command=cmd.verb, params=_echo(cmd.params))
    try:
        cache = open_cache(cmd, config)
        results, assertions = HANDLERS[cmd.verb](cmd, config, cache)
    except CapacityError as e:
        logger.error(f"容量超限: {e.message}")
        report.results = {"error": e.code, "message": e.message, "hint": e.hint}
        return 1, report
    except InternalInvariantError as e:
        logger.error(f"{BUG_MARKER}: {e.message}")
        report.results = {"error": e.code, "message": e.message, "bug_report": BUG_MARKER}
        return 1, report
    except QExtremalError as e:
        logger.error(f"{cmd.verb} 失败: {e.message}")
        report.results = {"error": e.code, "message": e.message}
        return 1, report

    report.results = results
    report.assertions = assertions
    if not report.passed:
        logger.warning(f"{cmd.verb}: 断言失败 {report.failed}")
    return (0 if report.passed else 1), report
