"""SHA-256 and SHA-512 (FIPS 180-4)."""
from __future__ import annotations

import struct

from blockstream.algorithms import kernels
from blockstream.algorithms.md import SHA_FAMILY_LIMIT, MDParams, build

IV256 = (
    0x6A09E667, 0xBB67AE85, 0x3C6EF372, 0xA54FF53A,
    0x510E527F, 0x9B05688C, 0x1F83D9AB, 0x5BE0CD19,
)
IV512 = (
    0x6A09E667F3BCC908, 0xBB67AE8584CAA73B, 0x3C6EF372FE94F82B, 0xA54FF53A5F1D36F1,
    0x510E527FADE682D1, 0x9B05688C2B3E6C1F, 0x1F83D9ABFB41BD6B, 0x5BE0CD19137E2179,
)
_K256 = [int(k) for k in kernels.SHA256_K]
_K512 = [int(k) for k in kernels.SHA512_K]


def _make_compress(bits, k, rounds, fmt, sigma_big, sigma_small):
    mask = (1 << bits) - 1

    def rotr(x, n):
        return ((x >> n) | (x << (bits - n))) & mask

    (b0a, b0b, b0c), (b1a, b1b, b1c) = sigma_big
    (s0a, s0b, s0c), (s1a, s1b, s1c) = sigma_small

    def compress_s(h: tuple[int, ...], block: bytes) -> tuple[int, ...]:
        w = list(struct.unpack(fmt, block))
        for t in range(16, rounds):
            x, y = w[t - 15], w[t - 2]
            s0 = rotr(x, s0a) ^ rotr(x, s0b) ^ (x >> s0c)
            s1 = rotr(y, s1a) ^ rotr(y, s1b) ^ (y >> s1c)
            w.append((w[t - 16] + s0 + w[t - 7] + s1) & mask)
        a, b, c, d, e, f, g, hh = h
        for t in range(rounds):
            t1 = (hh + (rotr(e, b1a) ^ rotr(e, b1b) ^ rotr(e, b1c)) + ((e & f) ^ (~e & g)) + k[t] + w[t]) & mask
            t2 = ((rotr(a, b0a) ^ rotr(a, b0b) ^ rotr(a, b0c)) + ((a & b) ^ (a & c) ^ (b & c))) & mask
            a, b, c, d, e, f, g, hh = (t1 + t2) & mask, a, b, c, (d + t1) & mask, e, f, g
        return tuple((x + y) & mask for x, y in zip(h, (a, b, c, d, e, f, g, hh)))

    return compress_s


compress256_s = _make_compress(32, _K256, 64, ">16I", ((2, 13, 22), (6, 11, 25)), ((7, 18, 3), (17, 19, 10)))
compress512_s = _make_compress(64, _K512, 80, ">16Q", ((28, 34, 39), (14, 18, 41)), ((1, 8, 7), (19, 61, 6)))

PARAMS256 = MDParams(
    name="sha256",
    block_len=64,
    output_len=32,
    word_bytes=4,
    byteorder="big",
    iv=IV256,
    compress_s=compress256_s,
    kernel=kernels.sha256_blocks,
    max_input_length=SHA_FAMILY_LIMIT,
)
PARAMS512 = MDParams(
    name="sha512",
    block_len=128,
    output_len=64,
    word_bytes=8,
    byteorder="big",
    iv=IV512,
    compress_s=compress512_s,
    kernel=kernels.sha512_blocks,
    max_input_length=SHA_FAMILY_LIMIT,
)


def sha256(buf_multiple: int = 1):
    return build(PARAMS256, buf_multiple)


def sha512(buf_multiple: int = 1):
    return build(PARAMS512, buf_multiple)
