"""
位掩码工具

顶点集合统一用 int 位掩码表示，第 i 位对应顶点 i
"""

from typing import Iterable, Iterator, List


def popcount(mask: int) -> int:
    """集合大小"""
    return mask.bit_count()


def iter_bits(mask: int) -> Iterator[int]:
    """按升序遍历置位的下标"""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def bits_to_list(mask: int) -> List[int]:
    return list(iter_bits(mask))


def mask_of(vertices: Iterable[int]) -> int:
    """顶点序列 -> 位掩码"""
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def full_mask(n: int) -> int:
    return (1 << n) - 1


def lowest_bit(mask: int) -> int:
    """最小的置位下标，mask 为 0 时返回 -1"""
    if not mask:
        return -1
    return (mask & -mask).bit_length() - 1
