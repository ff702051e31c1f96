"""SHA-1 (RFC 3174). Legacy; provided for agility, not for security."""
from __future__ import annotations

import struct

from blockstream.algorithms import kernels
from blockstream.algorithms.md import SHA_FAMILY_LIMIT, MDParams, build

IV = (0x67452301, 0xEFCDAB89, 0x98BADCFE, 0x10325476, 0xC3D2E1F0)
_M = 0xFFFFFFFF


def _rotl(x: int, n: int) -> int:
    return ((x << n) | (x >> (32 - n))) & _M


def compress_s(h: tuple[int, ...], block: bytes) -> tuple[int, ...]:
    w = list(struct.unpack(">16I", block))
    for t in range(16, 80):
        w.append(_rotl(w[t - 3] ^ w[t - 8] ^ w[t - 14] ^ w[t - 16], 1))
    a, b, c, d, e = h
    for t in range(80):
        if t < 20:
            f, k = (b & c) | (~b & d), 0x5A827999
        elif t < 40:
            f, k = b ^ c ^ d, 0x6ED9EBA1
        elif t < 60:
            f, k = (b & c) | (b & d) | (c & d), 0x8F1BBCDC
        else:
            f, k = b ^ c ^ d, 0xCA62C1D6
        tmp = (_rotl(a, 5) + (f & _M) + e + k + w[t]) & _M
        a, b, c, d, e = tmp, a, _rotl(b, 30), c, d
    return tuple((x + y) & _M for x, y in zip(h, (a, b, c, d, e)))


PARAMS = MDParams(
    name="sha1",
    block_len=64,
    output_len=20,
    word_bytes=4,
    byteorder="big",
    iv=IV,
    compress_s=compress_s,
    kernel=kernels.sha1_blocks,
    max_input_length=SHA_FAMILY_LIMIT,
)


def sha1(buf_multiple: int = 1):
    return build(PARAMS, buf_multiple)
