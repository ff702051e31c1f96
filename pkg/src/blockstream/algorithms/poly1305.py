"""Poly1305 one-time authenticator (RFC 8439).

The pure state is the pair ``(r, acc)``: ``r`` is the clamped multiplier,
fixed at initialization, and the fold only ever moves ``acc``. The ``s``
half of the key is needed again by ``finish``, so the key is kept at run
time (``KeyManagement.RUNTIME``).
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from blockstream.algorithms import kernels
from blockstream.algorithms.md import U64_MAX, as_u8
from blockstream.block_api import BlockAlgorithm, ContractViolation, KeyManagement, derive_update_multi

P = (1 << 130) - 5
CLAMP = 0x0FFFFFFC0FFFFFFC0FFFFFFC0FFFFFFF
BLOCK = 16
KEY_LEN = 32
TAG_LEN = 16
_LIMB = 0x3FFFFFF


def clamp_r(key: bytes) -> int:
    return int.from_bytes(key[:16], "little") & CLAMP


def _s(key: bytes) -> int:
    return int.from_bytes(key[16:32], "little")


def reference_tag(key: bytes, msg: bytes) -> bytes:
    """Straight from RFC 8439 (2.5.1): one chunk of up to 16 bytes at a time with 0x01 appended."""
    r, s = clamp_r(key), _s(key)
    acc = 0
    for off in range(0, len(msg), BLOCK):
        chunk = msg[off:off + BLOCK] + b"\x01"
        acc = ((acc + int.from_bytes(chunk, "little")) * r) % P
    return ((acc + s) % (1 << 128)).to_bytes(TAG_LEN, "little")


class PolyState(NamedTuple):
    r: int
    acc: int


class PolyBlockState:
    __slots__ = ("r", "acc")

    def __init__(self, r: np.ndarray, acc: np.ndarray):
        self.r = r
        self.acc = acc

    def copy(self) -> "PolyBlockState":
        # r never changes after init, so it can be shared
        return PolyBlockState(self.r, self.acc.copy())


def _to_limbs(x: int) -> np.ndarray:
    return np.array([(x >> (26 * i)) & _LIMB for i in range(5)], dtype=np.int64)


def _from_limbs(limbs) -> int:
    return sum(int(limb) << (26 * i) for i, limb in enumerate(limbs))


def _absorb(acc: int, r: int, chunk: bytes) -> int:
    return ((acc + int.from_bytes(chunk + b"\x01", "little")) * r) % P


def poly1305(buf_multiple: int = 1) -> BlockAlgorithm:
    def init_s(key: bytes) -> PolyState:
        return PolyState(clamp_r(key), 0)

    def update_block_s(st: PolyState, prevlen: int, block: bytes) -> PolyState:
        return PolyState(st.r, _absorb(st.acc, st.r, block))

    def update_last_s(st: PolyState, prevlen: int, last: bytes) -> PolyState:
        if len(last) > BLOCK:
            raise ContractViolation(f"update_last takes at most {BLOCK} bytes, got {len(last)}")
        if not last:
            return st
        return PolyState(st.r, _absorb(st.acc, st.r, last))

    def finish_s(key: bytes, st: PolyState) -> bytes:
        return ((st.acc + _s(key)) % (1 << 128)).to_bytes(TAG_LEN, "little")

    def state_init(key: bytes) -> PolyBlockState:
        return PolyBlockState(_to_limbs(clamp_r(key)), np.zeros(5, dtype=np.int64))

    def update_multi(st: PolyBlockState, prevlen: int, blocks) -> None:
        arr = as_u8(blocks)
        n, rem = divmod(arr.size, BLOCK)
        if rem:
            raise ContractViolation(f"{arr.size} bytes is not a multiple of the {BLOCK}-byte block")
        if n:
            kernels.poly1305_blocks(st.acc, st.r, arr, n, 1 << 24)

    def update_last(st: PolyBlockState, prevlen: int, last) -> None:
        last = bytes(last)
        if len(last) > BLOCK:
            raise ContractViolation(f"update_last takes at most {BLOCK} bytes, got {len(last)}")
        if len(last) == BLOCK:
            kernels.poly1305_blocks(st.acc, st.r, np.frombuffer(last, dtype=np.uint8), 1, 1 << 24)
        elif last:
            padded = last + b"\x01" + bytes(BLOCK - 1 - len(last))
            kernels.poly1305_blocks(st.acc, st.r, np.frombuffer(padded, dtype=np.uint8), 1, 0)

    def finish(key: bytes, st: PolyBlockState) -> bytes:
        acc = _from_limbs(st.acc) % P
        return ((acc + _s(key)) % (1 << 128)).to_bytes(TAG_LEN, "little")

    def reflect(st: PolyBlockState) -> PolyState:
        return PolyState(_from_limbs(st.r), _from_limbs(st.acc) % P)

    return BlockAlgorithm(
        name="poly1305",
        km=KeyManagement.RUNTIME,
        block_len=BLOCK,
        output_len=TAG_LEN,
        max_input_length=U64_MAX,
        key_len=KEY_LEN,
        spec_s=reference_tag,
        init_s=init_s,
        update_multi_s=derive_update_multi(BLOCK, update_block_s),
        update_last_s=update_last_s,
        finish_s=finish_s,
        state_init=state_init,
        state_copy=PolyBlockState.copy,
        update_multi=update_multi,
        update_last=update_last,
        finish=finish,
        reflect=reflect,
        buf_multiple=buf_multiple,
    )
