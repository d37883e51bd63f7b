"""
断言记录

每条断言带 expected/observed/margin，报告据此自描述
"""

from __future__ import annotations

from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field


class Assertion(BaseModel):
    """单条可核验的断言"""

    model_config = ConfigDict(populate_by_name=True, frozen=True)

    name: str
    expected: Any = None
    observed: Any = None
    margin: Optional[float] = None
    passed: bool = Field(alias="pass")


def check(
    name: str,
    passed: bool,
    expected: Any = None,
    observed: Any = None,
    margin: Optional[float] = None,
) -> Assertion:
    return Assertion(name=name, expected=expected, observed=observed, margin=margin, passed=bool(passed))
