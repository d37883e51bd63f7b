"""
graph6 编解码 (仅短格式, n <= 62)

位打包交给 networkx；这里只做短格式限制与逐字节的格式校验，
出错时报告第一个坏字节的偏移
"""

import logging

import networkx as nx

from core.errors import CapacityError, Graph6ParseError
from core.graph import Graph, from_networkx, to_networkx

logger = logging.getLogger(__name__)

SHORT_FORM_MAX = 62
HEADER = ">>graph6<<"


def graph6_encode(g: Graph) -> str:
    """图 -> graph6 文本"""
    if g.n > SHORT_FORM_MAX:
        raise CapacityError(
            f"graph6 短格式最多 {SHORT_FORM_MAX} 个顶点，实际 {g.n}",
            hint="本工具不支持 graph6 长格式",
        )
    data = nx.to_graph6_bytes(to_networkx(g), nodes=range(g.n), header=False)
    return data.decode("ascii").strip()


def _check_text(text: str) -> int:
    """校验短格式文本，返回顶点数"""
    if not text:
        raise Graph6ParseError("graph6 文本为空", offset=0)

    for offset, ch in enumerate(text):
        if not 63 <= ord(ch) <= 126:
            raise Graph6ParseError(f"非法字符 {ch!r}", offset=offset)

    n = ord(text[0]) - 63
    if n > SHORT_FORM_MAX:
        raise CapacityError(
            "graph6 长格式 (n > 62) 不受支持",
            hint="仅支持首字节 '?'..'}' 的短格式",
        )
    if n == 0:
        raise Graph6ParseError("图至少需要 1 个顶点", offset=0)

    nbits = n * (n - 1) // 2
    expected = 1 + (nbits + 5) // 6
    if len(text) < expected:
        raise Graph6ParseError(f"数据被截断: 需要 {expected} 字节，实际 {len(text)}", offset=len(text))
    if len(text) > expected:
        raise Graph6ParseError(f"多余的数据: 需要 {expected} 字节，实际 {len(text)}", offset=expected)

    padding = 6 * (expected - 1) - nbits
    if padding and (ord(text[-1]) - 63) & ((1 << padding) - 1):
        raise Graph6ParseError("填充位必须为 0", offset=expected - 1)
    return n


def graph6_decode(text: str) -> Graph:
    """graph6 文本 -> 图，格式错误时报告出错字节的偏移"""
    if text.startswith(HEADER):
        text = text[len(HEADER):]
    text = text.rstrip("\n")
    n = _check_text(text)
    try:
        h = nx.from_graph6_bytes(text.encode("ascii"))
    except nx.NetworkXError as e:
        raise Graph6ParseError(f"networkx 解析失败: {e}", offset=0)
    logger.debug(f"graph6 解码: n={n}, m={h.number_of_edges()}")
    return from_networkx(h)
