"""Blake2b and Blake2s (RFC 7693), keyed and unkeyed.

The keyed mode needs care: RFC 7693 prepends a zero-padded key block to the
message, and that block is the *final* block when the message is empty.
Key material is still consumed at initialization: ``init`` compresses the key
block both ways, keeping the non-final chaining value to continue from and the
final one as the answer for an empty message. The latter is dropped as soon
as any full block is absorbed.
"""
from __future__ import annotations

import struct
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from blockstream.algorithms import kernels
from blockstream.algorithms.md import U64_MAX, as_u8
from blockstream.block_api import BlockAlgorithm, ContractViolation, KeyManagement, derive_update_multi


@dataclass(frozen=True)
class Variant:
    name: str
    block_len: int
    word_bits: int
    rounds: int
    rotations: tuple[int, int, int, int]
    iv: tuple[int, ...]
    max_key: int
    max_digest: int

    @property
    def word_fmt(self) -> str:
        return "<16Q" if self.word_bits == 64 else "<16I"


BLAKE2B = Variant(
    "blake2b", 128, 64, 12, (32, 24, 16, 63), tuple(int(x) for x in kernels.BLAKE2B_IV), 64, 64
)
BLAKE2S = Variant(
    "blake2s", 64, 32, 10, (16, 12, 8, 7), tuple(int(x) for x in kernels.BLAKE2S_IV), 32, 32
)
_SIGMA = [[int(x) for x in row] for row in kernels.BLAKE2_SIGMA]


# ---------------------------------------------------------------------------
# pure reference


def compress_s(v: Variant, h: tuple[int, ...], block: bytes, t: int, final: bool) -> tuple[int, ...]:
    w = v.word_bits
    mask = (1 << w) - 1
    r1, r2, r3, r4 = v.rotations

    def rotr(x, n):
        return ((x >> n) | (x << (w - n))) & mask

    m = struct.unpack(v.word_fmt, block)
    s = list(h) + list(v.iv)
    s[12] ^= t & mask
    s[13] ^= (t >> w) & mask
    if final:
        s[14] ^= mask

    def g(a, b, c, d, x, y):
        s[a] = (s[a] + s[b] + x) & mask
        s[d] = rotr(s[d] ^ s[a], r1)
        s[c] = (s[c] + s[d]) & mask
        s[b] = rotr(s[b] ^ s[c], r2)
        s[a] = (s[a] + s[b] + y) & mask
        s[d] = rotr(s[d] ^ s[a], r3)
        s[c] = (s[c] + s[d]) & mask
        s[b] = rotr(s[b] ^ s[c], r4)

    for i in range(v.rounds):
        sg = _SIGMA[i % 10]
        g(0, 4, 8, 12, m[sg[0]], m[sg[1]])
        g(1, 5, 9, 13, m[sg[2]], m[sg[3]])
        g(2, 6, 10, 14, m[sg[4]], m[sg[5]])
        g(3, 7, 11, 15, m[sg[6]], m[sg[7]])
        g(0, 5, 10, 15, m[sg[8]], m[sg[9]])
        g(1, 6, 11, 12, m[sg[10]], m[sg[11]])
        g(2, 7, 8, 13, m[sg[12]], m[sg[13]])
        g(3, 4, 9, 14, m[sg[14]], m[sg[15]])
    return tuple(h[i] ^ s[i] ^ s[i + 8] for i in range(8))


def param_block_h(v: Variant, key_len: int, digest_len: int) -> tuple[int, ...]:
    h = list(v.iv)
    h[0] ^= 0x01010000 ^ (key_len << 8) ^ digest_len
    return tuple(h)


def reference_digest(v: Variant, key: bytes, data: bytes, digest_len: int) -> bytes:
    """Straight-line RFC 7693 BLAKE2: pad, compress all but the last block, finalize."""
    bb = v.block_len
    h = param_block_h(v, len(key), digest_len)
    padded = (key + bytes(bb - len(key)) if key else b"") + data
    ll = len(data)
    if not padded:
        padded = bytes(bb)
    if len(padded) % bb:
        padded += bytes(bb - len(padded) % bb)
    dd = len(padded) // bb
    for i in range(dd - 1):
        h = compress_s(v, h, padded[i * bb:(i + 1) * bb], (i + 1) * bb, False)
    final_t = ll + bb if key else ll
    h = compress_s(v, h, padded[(dd - 1) * bb:], final_t, True)
    return _serialize(v, h, digest_len)


def _serialize(v: Variant, h, digest_len: int) -> bytes:
    wb = v.word_bits // 8
    return b"".join(int(x).to_bytes(wb, "little") for x in h)[:digest_len]


class Blake2State(NamedTuple):
    """Pure block state: chaining value plus the pending empty-message answer."""

    h: tuple[int, ...]
    empty_h: tuple[int, ...] | None


# ---------------------------------------------------------------------------
# imperative state


class Blake2BlockState:
    __slots__ = ("h", "empty_h")

    def __init__(self, h: np.ndarray, empty_h: np.ndarray | None):
        self.h = h
        self.empty_h = empty_h

    def copy(self) -> "Blake2BlockState":
        return Blake2BlockState(self.h.copy(), None if self.empty_h is None else self.empty_h.copy())


def build(v: Variant, key_len: int = 0, digest_len: int | None = None, buf_multiple: int = 1) -> BlockAlgorithm:
    if digest_len is None:
        digest_len = v.max_digest
    bb = v.block_len
    offset = bb if key_len else 0
    kernel = kernels.blake2b_blocks if v.word_bits == 64 else kernels.blake2s_blocks
    dtype = np.uint64 if v.word_bits == 64 else np.int64
    word = np.uint64 if v.word_bits == 64 else np.int64
    wmask = (1 << v.word_bits) - 1

    def key_block(key: bytes) -> bytes:
        return key + bytes(bb - len(key))

    # pure side
    def spec_s(key: bytes, data: bytes) -> bytes:
        return reference_digest(v, key, data, digest_len)

    def init_s(key: bytes) -> Blake2State:
        h = param_block_h(v, key_len, digest_len)
        if not key_len:
            return Blake2State(h, None)
        kb = key_block(key)
        return Blake2State(compress_s(v, h, kb, bb, False), compress_s(v, h, kb, bb, True))

    def update_block_s(st: Blake2State, prevlen: int, block: bytes) -> Blake2State:
        return Blake2State(compress_s(v, st.h, block, offset + prevlen + bb, False), None)

    def update_last_s(st: Blake2State, prevlen: int, last: bytes) -> Blake2State:
        if len(last) > bb:
            raise ContractViolation(f"update_last takes at most {bb} bytes, got {len(last)}")
        if not last and st.empty_h is not None:
            return Blake2State(st.empty_h, None)
        t = offset + prevlen + len(last)
        return Blake2State(compress_s(v, st.h, last + bytes(bb - len(last)), t, True), None)

    def finish_s(key: bytes, st: Blake2State) -> bytes:
        return _serialize(v, st.h, digest_len)

    # imperative side
    def run(h: np.ndarray, data: np.ndarray, n: int, t: int, last: bool) -> None:
        kernel(h, data, n, word(t & wmask), word((t >> v.word_bits) & wmask), last)

    def state_init(key: bytes) -> Blake2BlockState:
        h = np.array(param_block_h(v, key_len, digest_len), dtype=dtype)
        if not key_len:
            return Blake2BlockState(h, None)
        kb = np.frombuffer(key_block(key), dtype=np.uint8)
        empty_h = h.copy()
        run(h, kb, 1, 0, False)
        run(empty_h, kb, 1, bb, True)
        return Blake2BlockState(h, empty_h)

    def update_multi(st: Blake2BlockState, prevlen: int, blocks) -> None:
        arr = as_u8(blocks)
        n, rem = divmod(arr.size, bb)
        if rem:
            raise ContractViolation(f"{arr.size} bytes is not a multiple of the {bb}-byte block")
        if n:
            run(st.h, arr, n, offset + prevlen, False)
            st.empty_h = None

    def update_last(st: Blake2BlockState, prevlen: int, last) -> None:
        last = bytes(last)
        if len(last) > bb:
            raise ContractViolation(f"update_last takes at most {bb} bytes, got {len(last)}")
        if not last and st.empty_h is not None:
            st.h = st.empty_h
        else:
            padded = np.frombuffer(last + bytes(bb - len(last)), dtype=np.uint8)
            run(st.h, padded, 1, offset + prevlen + len(last), True)
        st.empty_h = None

    def finish(key: bytes, st: Blake2BlockState) -> bytes:
        return _serialize(v, st.h, digest_len)

    def reflect(st: Blake2BlockState) -> Blake2State:
        empty = None if st.empty_h is None else tuple(int(x) for x in st.empty_h)
        return Blake2State(tuple(int(x) for x in st.h), empty)

    suffix = f"-{8 * digest_len}" if digest_len != v.max_digest else ""
    return BlockAlgorithm(
        name=v.name + suffix + ("-keyed" if key_len else ""),
        km=KeyManagement.ERASED if key_len else KeyManagement.NONE,
        block_len=bb,
        output_len=digest_len,
        max_input_length=U64_MAX,
        key_len=key_len,
        spec_s=spec_s,
        init_s=init_s,
        update_multi_s=derive_update_multi(bb, update_block_s),
        update_last_s=update_last_s,
        finish_s=finish_s,
        state_init=state_init,
        state_copy=Blake2BlockState.copy,
        update_multi=update_multi,
        update_last=update_last,
        finish=finish,
        reflect=reflect,
        buf_multiple=buf_multiple,
    )


def blake2b(key_len: int = 0, digest_len: int | None = None, buf_multiple: int = 1) -> BlockAlgorithm:
    return build(BLAKE2B, key_len, digest_len, buf_multiple)


def blake2s(key_len: int = 0, digest_len: int | None = None, buf_multiple: int = 1) -> BlockAlgorithm:
    return build(BLAKE2S, key_len, digest_len, buf_multiple)
