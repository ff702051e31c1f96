"""Known-answer vectors from the defining standards, and a runner for them.

Vectors live in ``data/kat.json``. Messages and keys are described rather
than spelled out so that long inputs (a million ``a``) stay small on disk:
``{"ascii": s}``, ``{"hex": h}`` or ``{"counting": n}`` (bytes 0..n-1),
each optionally with ``"repeat": k``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from blockstream import streaming
from blockstream.algorithms import instance

__all__ = ["KatError", "KatResult", "KatVector", "load_vectors", "run_vector"]

# fed in odd-sized pieces so the buffered path is exercised, not just one call
_CHUNK = 1000


class KatError(ValueError):
    """The vector file is unreadable or malformed."""


@dataclass(frozen=True)
class KatVector:
    alg: str
    source: str
    key: bytes
    msg: bytes
    digest: bytes


@dataclass(frozen=True)
class KatResult:
    vector: KatVector
    got: bytes

    @property
    def ok(self) -> bool:
        return self.got == self.vector.digest


def _decode(desc: dict) -> bytes:
    if "ascii" in desc:
        base = desc["ascii"].encode("ascii")
    elif "hex" in desc:
        base = bytes.fromhex(desc["hex"])
    elif "counting" in desc:
        base = bytes(i & 0xFF for i in range(desc["counting"]))
    else:
        raise KatError(f"cannot decode byte string description {desc!r}")
    return base * int(desc.get("repeat", 1))


def load_vectors(path: str | Path | None = None) -> list[KatVector]:
    """Parse the bundled vectors, or the file at ``path``."""
    try:
        if path is None:
            text = resources.files("blockstream.data").joinpath("kat.json").read_text("utf-8")
        else:
            text = Path(path).read_text("utf-8")
        raw = json.loads(text)
        vectors = [
            KatVector(
                alg=v["alg"],
                source=v.get("source", ""),
                key=_decode(v["key"]) if "key" in v else b"",
                msg=_decode(v["msg"]),
                digest=bytes.fromhex(v["digest"]),
            )
            for v in raw["vectors"]
        ]
    except (OSError, ValueError, KeyError, TypeError, AttributeError) as exc:
        raise KatError(f"bad vector file: {exc}") from exc
    return vectors


def run_vector(v: KatVector) -> KatResult:
    key_len = len(v.key) if v.alg not in ("poly1305",) else None
    alg = instance(v.alg, key_len=key_len, digest_len=len(v.digest) if v.alg.startswith("blake2") else None)
    with streaming.create(alg, v.key) as st:
        for i in range(0, len(v.msg), _CHUNK):
            st.update(v.msg[i:i + _CHUNK])
        return KatResult(v, st.digest())
