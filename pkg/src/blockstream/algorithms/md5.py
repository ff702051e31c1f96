"""MD5 (RFC 1321). Legacy; provided for agility, not for security."""
from __future__ import annotations

import struct

from blockstream.algorithms import kernels
from blockstream.algorithms.md import U64_MAX, MDParams, build

IV = (0x67452301, 0xEFCDAB89, 0x98BADCFE, 0x10325476)
_K = [int(k) for k in kernels.MD5_K]
_S = [int(s) for s in kernels.MD5_S]
_M = 0xFFFFFFFF


def _rotl(x: int, n: int) -> int:
    return ((x << n) | (x >> (32 - n))) & _M


def compress_s(h: tuple[int, ...], block: bytes) -> tuple[int, ...]:
    m = struct.unpack("<16I", block)
    a, b, c, d = h
    for i in range(64):
        r = i // 16
        if r == 0:
            f, g = (b & c) | (~b & d), i
        elif r == 1:
            f, g = (d & b) | (~d & c), (5 * i + 1) % 16
        elif r == 2:
            f, g = b ^ c ^ d, (3 * i + 5) % 16
        else:
            f, g = c ^ (b | (~d & _M)), (7 * i) % 16
        f = (f + a + _K[i] + m[g]) & _M
        a, d, c, b = d, c, b, (b + _rotl(f, _S[i])) & _M
    return tuple((x + y) & _M for x, y in zip(h, (a, b, c, d)))


PARAMS = MDParams(
    name="md5",
    block_len=64,
    output_len=16,
    word_bytes=4,
    byteorder="little",
    iv=IV,
    compress_s=compress_s,
    kernel=kernels.md5_blocks,
    max_input_length=U64_MAX,
)


def md5(buf_multiple: int = 1):
    return build(PARAMS, buf_multiple)
