"""
报告模型与输出

JSON 报告结构固定: {tool_version, command, params, results, assertions[]}；
实数统一保留 12 位有效数字
"""

import json
import logging
import math
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

import pandas as pd
from pydantic import BaseModel, Field

from core.assertion import Assertion

logger = logging.getLogger(__name__)


class Report(BaseModel):
    """一次命令的完整报告"""
    tool_version: str
    command: str
    params: Dict[str, Any] = Field(default_factory=dict)
    results: Dict[str, Any] = Field(default_factory=dict)
    assertions: List[Assertion] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(a.passed for a in self.assertions)

    @property
    def failed(self) -> List[str]:
        return [a.name for a in self.assertions if not a.passed]


def round_significant(value: Any, digits: int = 12) -> Any:
    """递归地把实数截到 digits 位有效数字"""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, float):
        if not math.isfinite(value):
            return str(value)
        return float(f"{value:.{digits}g}")
    if isinstance(value, dict):
        return {k: round_significant(v, digits) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [round_significant(v, digits) for v in value]
    return value


def to_json(report: Report, digits: int = 12) -> str:
    data = report.model_dump(mode="json", by_alias=True)
    return json.dumps(round_significant(data, digits), indent=2, ensure_ascii=False)


def to_table(report: Report, digits: int = 12) -> str:
    """人读的表格 (不承诺格式稳定)"""
    lines = [f"{report.command}  (tool {report.tool_version})", ""]
    if report.params:
        params = pd.Series(report.params, dtype=object).to_frame("value")
        lines += ["参数:", params.to_string(), ""]

    results = round_significant(report.results, digits)
    if results:
        flat = pd.json_normalize(results, sep=".")
        lines += ["结果:", flat.T.rename(columns={0: "value"}).to_string(), ""]

    if report.assertions:
        rows = [round_significant(a.model_dump(by_alias=True), digits) for a in report.assertions]
        df = pd.DataFrame(rows, columns=["name", "pass", "expected", "observed", "margin"])
        lines += ["断言:", df.to_string(index=False), ""]
        lines.append(f"通过 {sum(a.passed for a in report.assertions)}/{len(report.assertions)}")
    return "\n".join(lines)


def render(report: Report, fmt: str = "json", digits: int = 12) -> str:
    if fmt == "table":
        return to_table(report, digits)
    return to_json(report, digits)


def write_report(report: Report, fmt: str = "json", output: Optional[str] = None, digits: int = 12):
    """写到文件或标准输出"""
    text = render(report, fmt, digits)
    if output and output != "-":
        path = Path(output)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text + "\n", encoding="utf-8")
        logger.info(f"报告已写入: {path}")
    else:
        sys.stdout.write(text + "\n")
