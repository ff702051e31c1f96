"""Shared instances, independent oracles and a toy block algorithm for tests."""
from __future__ import annotations

import hashlib
import random

from cryptography.hazmat.primitives.poly1305 import Poly1305

from blockstream.algorithms import AgileAlgId, instance
from blockstream.block_api import BlockAlgorithm, KeyManagement, derive_update_multi

# criterion number -> (passed, title, detail); printed by conftest at session end
ACCEPTANCE: dict[int, tuple[bool, str, str]] = {}

# the seven shipped instances; keyed Blake2 is covered separately
SHIPPED = ("md5", "sha1", "sha256", "sha512", "blake2s", "blake2b", "poly1305")
HASHLIB_NAME = {"sha256": "sha256", "sha512": "sha512", "sha1": "sha1", "md5": "md5"}
AGILE_NAMES = {
    AgileAlgId.MD5: "md5",
    AgileAlgId.SHA1: "sha1",
    AgileAlgId.SHA2_256: "sha256",
    AgileAlgId.SHA2_512: "sha512",
    AgileAlgId.BLAKE2S: "blake2s",
    AgileAlgId.BLAKE2B: "blake2b",
}


def oracle(name: str, key: bytes, data: bytes, digest_len: int | None = None) -> bytes:
    """Digest from an implementation that shares no code with this package."""
    if name == "poly1305":
        return Poly1305.generate_tag(key, data)
    if name in ("blake2b", "blake2s"):
        kw = {"digest_size": digest_len} if digest_len else {}
        return getattr(hashlib, name)(data, key=key, **kw).digest()
    if name == "agile":
        return oracle(AGILE_NAMES[AgileAlgId(key[0])], b"", data)
    return hashlib.new(HASHLIB_NAME[name], data).digest()


def random_key(alg: BlockAlgorithm, rng: random.Random) -> bytes:
    if alg.name == "agile":
        return rng.choice(list(AgileAlgId)).key
    return rng.randbytes(alg.key_len)


def shipped(buf_multiple: int = 1) -> dict[str, BlockAlgorithm]:
    algs = {n: instance(n, buf_multiple=buf_multiple) for n in SHIPPED}
    algs["agile"] = instance("agile", buf_multiple=buf_multiple)
    return algs


def random_partition(rng: random.Random, n: int) -> list[int]:
    """Cut points splitting ``n`` bytes into chunks, empty chunks included."""
    cuts = sorted(rng.randint(0, n) for _ in range(rng.randint(0, 6)))
    return [0, *cuts, n]


def chunks(data: bytes, cuts: list[int]) -> list[bytes]:
    return [data[a:b] for a, b in zip(cuts, cuts[1:])]


# ---------------------------------------------------------------------------
# a toy algorithm with 1-byte blocks whose state depends on the block offset,
# so a wrong prevlen in any fold shows up


def _toy_block(st: int, prevlen: int, block: bytes) -> int:
    return (st * 257 + block[0] * (prevlen + 3)) % 65521


def toy_algorithm() -> BlockAlgorithm:
    update_multi_s = derive_update_multi(1, _toy_block)

    def update_last_s(st, prevlen, last):
        return (st * 7 + len(last) * 13 + sum(last) + prevlen) % 65521

    def finish_s(key, st):
        return st.to_bytes(2, "big")

    def spec_s(key, data):
        n = len(data) - 1 if data else 0
        return finish_s(key, update_last_s(update_multi_s(1, 0, data[:n]), n, data[n:]))

    def update_multi(box, prevlen, blocks):
        box[0] = update_multi_s(box[0], prevlen, bytes(blocks))

    def update_last(box, prevlen, last):
        box[0] = update_last_s(box[0], prevlen, bytes(last))

    return BlockAlgorithm(
        name="toy",
        km=KeyManagement.NONE,
        block_len=1,
        output_len=2,
        max_input_length=2**64 - 1,
        key_len=0,
        spec_s=spec_s,
        init_s=lambda key: 1,
        update_multi_s=update_multi_s,
        update_last_s=update_last_s,
        finish_s=finish_s,
        state_init=lambda key: [1],
        state_copy=lambda box: list(box),
        update_multi=update_multi,
        update_last=update_last,
        finish=lambda key, box: finish_s(key, box[0]),
        reflect=lambda box: box[0],
    )
