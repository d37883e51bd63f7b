"""
错误类型

所有模块只抛异常，由 CLI 层统一转换为退出码和报告断言
"""

from typing import Optional


class QExtremalError(Exception):
    """工具包基础错误"""

    exit_code = 1

    def __init__(self, message: str, code: Optional[str] = None):
        self.message = message
        self.code = code or self.__class__.__name__
        super().__init__(self.message)


class GraphDomainError(QExtremalError, ValueError):
    """参数超出定义域 (顶点越界、自环、族参数非法等)"""


class CapacityError(QExtremalError):
    """超出容量上限"""

    def __init__(self, message: str, hint: Optional[str] = None):
        super().__init__(message)
        self.hint = hint or ""


class Graph6ParseError(QExtremalError, ValueError):
    """graph6 文本格式错误"""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


class DisconnectedGraphError(QExtremalError):
    """输入图不连通"""


class ConvergenceError(QExtremalError):
    """幂迭代在迭代上限内未收敛"""

    def __init__(self, message: str, last_residual: float, iterations: int):
        super().__init__(message)
        self.last_residual = last_residual
        self.iterations = iterations


class BracketError(QExtremalError, ValueError):
    """三次方程区间两端无变号"""


class ConfigError(QExtremalError):
    """配置文件错误"""


class UsageError(QExtremalError):
    """命令行用法错误"""

    exit_code = 2

    def __init__(self, message: str, flag: Optional[str] = None):
        super().__init__(message)
        self.flag = flag


class InternalInvariantError(QExtremalError):
    """内部不变量被破坏 (属于 bug)"""
