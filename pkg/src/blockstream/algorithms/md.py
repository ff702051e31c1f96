"""Shared machinery for Merkle-Damgard hashes (MD5, SHA-1, SHA-2).

Each hash contributes an initial chaining value, a pure compression function
over Python ints and a numpy kernel. Everything else (padding, the block
transitions, serialization) is common and lives here.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from blockstream.block_api import BlockAlgorithm, ContractViolation, KeyManagement, derive_update_multi

SHA_FAMILY_LIMIT = 2**61 - 1
U64_MAX = 2**64 - 1


@dataclass(frozen=True)
class MDParams:
    name: str
    block_len: int
    output_len: int
    word_bytes: int
    byteorder: str
    iv: tuple[int, ...]
    compress_s: Callable[[tuple[int, ...], bytes], tuple[int, ...]]
    kernel: Callable
    max_input_length: int

    @property
    def length_field(self) -> int:
        return 2 * self.word_bytes


def md_padding(params: MDParams, total_len: int) -> bytes:
    """The suffix appended to a message of ``total_len`` bytes before the last compressions."""
    lf = params.length_field
    zeros = (params.block_len - lf - 1 - total_len) % params.block_len
    bits = (8 * total_len) % (1 << (8 * lf))
    return b"\x80" + bytes(zeros) + bits.to_bytes(lf, params.byteorder)


def _serialize(params: MDParams, words) -> bytes:
    out = b"".join(int(w).to_bytes(params.word_bytes, params.byteorder) for w in words)
    return out[: params.output_len]


def _word_dtype(params: MDParams):
    return np.uint64 if params.word_bytes == 8 else np.int64


def as_u8(data) -> np.ndarray:
    """Zero-copy uint8 view over any bytes-like object."""
    if isinstance(data, np.ndarray):
        return data.view(np.uint8).reshape(-1)
    return np.frombuffer(data, dtype=np.uint8)


def build(params: MDParams, buf_multiple: int = 1) -> BlockAlgorithm:
    bl = params.block_len
    kernel = params.kernel

    # pure side
    def compress_all(h, data: bytes):
        for off in range(0, len(data), bl):
            h = params.compress_s(h, data[off:off + bl])
        return h

    def spec_s(key: bytes, data: bytes) -> bytes:
        return _serialize(params, compress_all(params.iv, data + md_padding(params, len(data))))

    def init_s(key: bytes):
        return params.iv

    def update_block_s(h, prevlen: int, block: bytes):
        return params.compress_s(h, block)

    def update_last_s(h, prevlen: int, last: bytes):
        if len(last) > bl:
            raise ContractViolation(f"update_last takes at most {bl} bytes, got {len(last)}")
        return compress_all(h, last + md_padding(params, prevlen + len(last)))

    def finish_s(key: bytes, h) -> bytes:
        return _serialize(params, h)

    # imperative side
    dtype = _word_dtype(params)

    def state_init(key: bytes):
        return np.array(params.iv, dtype=dtype)

    def update_multi(st, prevlen: int, blocks) -> None:
        arr = as_u8(blocks)
        n, rem = divmod(arr.size, bl)
        if rem:
            raise ContractViolation(f"{arr.size} bytes is not a multiple of the {bl}-byte block")
        if n:
            kernel(st, arr, n)

    def update_last(st, prevlen: int, last) -> None:
        last = bytes(last)
        if len(last) > bl:
            raise ContractViolation(f"update_last takes at most {bl} bytes, got {len(last)}")
        padded = np.frombuffer(last + md_padding(params, prevlen + len(last)), dtype=np.uint8)
        kernel(st, padded, padded.size // bl)

    def finish(key: bytes, st) -> bytes:
        return _serialize(params, st)

    return BlockAlgorithm(
        name=params.name,
        km=KeyManagement.NONE,
        block_len=bl,
        output_len=params.output_len,
        max_input_length=params.max_input_length,
        key_len=0,
        spec_s=spec_s,
        init_s=init_s,
        update_multi_s=derive_update_multi(bl, update_block_s),
        update_last_s=update_last_s,
        finish_s=finish_s,
        state_init=state_init,
        state_copy=np.copy,
        update_multi=update_multi,
        update_last=update_last,
        finish=finish,
        reflect=lambda st: tuple(int(w) for w in st),
        buf_multiple=buf_multiple,
    )
