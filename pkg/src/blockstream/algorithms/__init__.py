"""Concrete block algorithms and the run-time agile multiplexer."""
from __future__ import annotations

from blockstream.algorithms.agile import ROSTER, AgileAlgId, agile_instance
from blockstream.algorithms.blake2 import BLAKE2B, BLAKE2S, blake2b, blake2s
from blockstream.algorithms.md5 import md5
from blockstream.algorithms.poly1305 import poly1305
from blockstream.algorithms.sha1 import sha1
from blockstream.algorithms.sha2 import sha256, sha512
from blockstream.block_api import BlockAlgorithm

__all__ = [
    "ALGORITHM_NAMES",
    "AgileAlgId",
    "OptionRejected",
    "ROSTER",
    "agile_instance",
    "instance",
]

MAX_BUF_MULTIPLE = 16

ALGORITHM_NAMES = ("md5", "sha1", "sha256", "sha512", "blake2s", "blake2b", "poly1305")

_ALIASES = {
    AgileAlgId.MD5: "md5",
    AgileAlgId.SHA1: "sha1",
    AgileAlgId.SHA2_256: "sha256",
    AgileAlgId.SHA2_512: "sha512",
    AgileAlgId.BLAKE2S: "blake2s",
    AgileAlgId.BLAKE2B: "blake2b",
}


class OptionRejected(ValueError):
    """The options passed to :func:`instance` are invalid for the algorithm."""


def instance(
    alg: str | AgileAlgId,
    *,
    key_len: int | None = None,
    digest_len: int | None = None,
    buf_multiple: int = 1,
) -> BlockAlgorithm:
    """Build the descriptor for ``alg`` ("sha256", "blake2b", ... or an :class:`AgileAlgId`)."""
    name = _ALIASES.get(alg, alg) if isinstance(alg, AgileAlgId) else str(alg).lower()
    if not 1 <= buf_multiple <= MAX_BUF_MULTIPLE:
        raise OptionRejected(f"buf_multiple must be in 1..{MAX_BUF_MULTIPLE}, got {buf_multiple}")

    if name in ("blake2b", "blake2s"):
        variant = BLAKE2B if name == "blake2b" else BLAKE2S
        key_len = 0 if key_len is None else key_len
        digest_len = variant.max_digest if digest_len is None else digest_len
        if not 0 <= key_len <= variant.max_key:
            raise OptionRejected(f"{name} key length must be in 0..{variant.max_key}, got {key_len}")
        if not 1 <= digest_len <= variant.max_digest:
            raise OptionRejected(f"{name} digest length must be in 1..{variant.max_digest}, got {digest_len}")
        make = blake2b if name == "blake2b" else blake2s
        return make(key_len=key_len, digest_len=digest_len, buf_multiple=buf_multiple)

    if name == "poly1305":
        if key_len not in (None, 32) or digest_len not in (None, 16):
            raise OptionRejected("poly1305 takes a 32-byte key and produces a 16-byte tag")
        return poly1305(buf_multiple)

    hashes = {"md5": md5, "sha1": sha1, "sha256": sha256, "sha512": sha512}
    if name in hashes:
        alg_ = hashes[name](buf_multiple)
        if key_len not in (None, 0):
            raise OptionRejected(f"{name} is unkeyed")
        if digest_len not in (None, alg_.output_len):
            raise OptionRejected(f"{name} digest length is fixed at {alg_.output_len}")
        return alg_

    if name == "agile":
        if key_len not in (None, 1) or digest_len is not None:
            raise OptionRejected("agile takes no key or digest options")
        return agile_instance(buf_multiple)

    raise OptionRejected(f"unknown algorithm {alg!r}")
