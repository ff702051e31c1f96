"""A run-time agile hash: one descriptor, algorithm chosen at ``init``.

The "key" of the agile descriptor is a single byte holding an
:class:`AgileAlgId`. The block state is a tagged pair and every transition
dispatches on the stored tag. The descriptor advertises the roster maxima
(128-byte blocks, 64-byte output); since every roster block size divides 128,
whole agile blocks are whole blocks for the selected hash, and a final chunk
of up to 128 bytes is re-split at the real block size.
"""
from __future__ import annotations

import enum
from typing import Callable, NamedTuple

from blockstream.algorithms.blake2 import blake2b, blake2s
from blockstream.algorithms.md5 import md5
from blockstream.algorithms.sha1 import sha1
from blockstream.algorithms.sha2 import sha256, sha512
from blockstream.block_api import BlockAlgorithm, ContractViolation, KeyManagement, split_at_last


class AgileAlgId(enum.IntEnum):
    MD5 = 0
    SHA1 = 1
    SHA2_256 = 2
    SHA2_512 = 3
    BLAKE2S = 4
    BLAKE2B = 5

    @property
    def key(self) -> bytes:
        return bytes([self.value])


_FACTORIES: dict[AgileAlgId, Callable[[], BlockAlgorithm]] = {
    AgileAlgId.MD5: md5,
    AgileAlgId.SHA1: sha1,
    AgileAlgId.SHA2_256: sha256,
    AgileAlgId.SHA2_512: sha512,
    AgileAlgId.BLAKE2S: blake2s,
    AgileAlgId.BLAKE2B: blake2b,
}
ROSTER: dict[AgileAlgId, BlockAlgorithm] = {alg_id: make() for alg_id, make in _FACTORIES.items()}


class Tagged(NamedTuple):
    alg_id: AgileAlgId
    inner: object


def decode_key(key: bytes) -> AgileAlgId:
    if len(key) != 1:
        raise ContractViolation(f"agile key is one algorithm-id byte, got {len(key)} bytes")
    try:
        return AgileAlgId(key[0])
    except ValueError:
        raise ContractViolation(f"unknown agile algorithm id {key[0]}") from None


def agile_instance(buf_multiple: int = 1) -> BlockAlgorithm:
    block_len = max(a.block_len for a in ROSTER.values())
    assert all(block_len % a.block_len == 0 for a in ROSTER.values())

    def inner(alg_id: AgileAlgId) -> BlockAlgorithm:
        return ROSTER[alg_id]

    # pure side
    def spec_s(key: bytes, data: bytes) -> bytes:
        return inner(decode_key(key)).spec_s(b"", data)

    def init_s(key: bytes) -> Tagged:
        alg_id = decode_key(key)
        return Tagged(alg_id, inner(alg_id).init_s(b""))

    def update_multi_s(st: Tagged, prevlen: int, blocks: bytes) -> Tagged:
        if len(blocks) % block_len:
            raise ContractViolation(f"{len(blocks)} bytes is not a multiple of {block_len}")
        return Tagged(st.alg_id, inner(st.alg_id).update_multi_s(st.inner, prevlen, blocks))

    def update_last_s(st: Tagged, prevlen: int, last: bytes) -> Tagged:
        a = inner(st.alg_id)
        b, l = split_at_last(a.block_len, last)
        s = a.update_multi_s(st.inner, prevlen, b)
        return Tagged(st.alg_id, a.update_last_s(s, prevlen + len(b), l))

    def finish_s(key: bytes, st: Tagged) -> bytes:
        return inner(st.alg_id).finish_s(b"", st.inner)

    # imperative side
    def state_init(key: bytes) -> Tagged:
        alg_id = decode_key(key)
        return Tagged(alg_id, inner(alg_id).state_init(b""))

    def state_copy(st: Tagged) -> Tagged:
        return Tagged(st.alg_id, inner(st.alg_id).state_copy(st.inner))

    def update_multi(st: Tagged, prevlen: int, blocks) -> None:
        if len(blocks) % block_len:
            raise ContractViolation(f"{len(blocks)} bytes is not a multiple of {block_len}")
        inner(st.alg_id).update_multi(st.inner, prevlen, blocks)

    def update_last(st: Tagged, prevlen: int, last) -> None:
        a = inner(st.alg_id)
        b, l = split_at_last(a.block_len, bytes(last))
        a.update_multi(st.inner, prevlen, b)
        a.update_last(st.inner, prevlen + len(b), l)

    def finish(key: bytes, st: Tagged) -> bytes:
        return inner(st.alg_id).finish(b"", st.inner)

    def reflect(st: Tagged) -> Tagged:
        return Tagged(st.alg_id, inner(st.alg_id).reflect(st.inner))

    return BlockAlgorithm(
        name="agile",
        km=KeyManagement.RUNTIME,
        block_len=block_len,
        output_len=max(a.output_len for a in ROSTER.values()),
        max_input_length=min(a.max_input_length for a in ROSTER.values()),
        key_len=1,
        spec_s=spec_s,
        init_s=init_s,
        update_multi_s=update_multi_s,
        update_last_s=update_last_s,
        finish_s=finish_s,
        state_init=state_init,
        state_copy=state_copy,
        update_multi=update_multi,
        update_last=update_last,
        finish=finish,
        reflect=reflect,
        buf_multiple=buf_multiple,
        digest_len_for=lambda key: inner(decode_key(key)).output_len,
    )
