"""The block-algorithm abstraction and its pure specification algebra.

A :class:`BlockAlgorithm` bundles three things for one algorithm:

* run-time characteristics (block size, output size, key handling, limits);
* a pure specification: a one-shot ``spec_s`` plus the pure transitions
  ``init_s`` / ``update_multi_s`` / ``update_last_s`` / ``finish_s``;
* imperative callbacks that mutate an opaque block state and refine the
  pure transitions (``reflect`` maps an imperative state to its pure value).

``prevlen`` arguments everywhere are byte counts of input already absorbed.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Any, Callable, NamedTuple

__all__ = [
    "BlockAlgorithm",
    "ContractViolation",
    "InputTooLong",
    "KeyLengthMismatch",
    "KeyManagement",
    "SplitResult",
    "derive_update_multi",
    "incremental_spec",
    "one_shot",
    "split_at_last",
]

U64_LIMIT = 2**64


class ContractViolation(RuntimeError):
    """A caller broke a precondition; this is a bug, not a recoverable error."""


class InputTooLong(ValueError):
    """Input exceeds an algorithm's ``max_input_length``."""


class KeyLengthMismatch(ValueError):
    """A key of the wrong length was supplied."""


class KeyManagement(enum.Enum):
    #: key kept in the streaming state and handed to ``finish`` (e.g. Poly1305)
    RUNTIME = "runtime"
    #: key consumed by ``state_init`` and never stored (e.g. keyed Blake2)
    ERASED = "erased"
    #: no key; ``key_len`` is 0 and the key is always ``b""``
    NONE = "none"


class SplitResult(NamedTuple):
    blocks: bytes
    rest: bytes


def split_at_last(unit_len: int, data: bytes) -> SplitResult:
    """Split ``data`` into whole units plus a tail that is never empty unless ``data`` is.

    A length that is an exact multiple of ``unit_len`` keeps its last unit in
    the tail, so a final-block transition always has something to consume.
    """
    if unit_len <= 0:
        raise ContractViolation(f"unit_len must be positive, got {unit_len}")
    n, rem = divmod(len(data), unit_len)
    if rem == 0 and n > 0:
        n -= 1
    cut = n * unit_len
    return SplitResult(bytes(data[:cut]), bytes(data[cut:]))


def derive_update_multi(
    block_len: int, update_block_s: Callable[[Any, int, bytes], Any]
) -> Callable[[Any, int, bytes], Any]:
    """Lift a single-block pure transition to a multi-block one.

    The result is the left fold over consecutive blocks with ``prevlen``
    advancing by ``block_len`` per block, so it obeys the fold law by
    construction.
    """
    if block_len <= 0:
        raise ContractViolation(f"block_len must be positive, got {block_len}")

    def update_multi_s(state: Any, prevlen: int, blocks: bytes) -> Any:
        if len(blocks) % block_len:
            raise ContractViolation(
                f"{len(blocks)} bytes is not a multiple of the {block_len}-byte block"
            )
        for off in range(0, len(blocks), block_len):
            state = update_block_s(state, prevlen + off, blocks[off:off + block_len])
        return state

    update_multi_s.__name__ = f"update_multi_of_{getattr(update_block_s, '__name__', 'block')}"
    return update_multi_s


@dataclass(frozen=True, eq=False)
class BlockAlgorithm:
    """Descriptor, pure specification and imperative callbacks of one block algorithm.

    Instances are immutable and may be shared freely between threads; the
    block states they create are not.
    """

    name: str
    km: KeyManagement
    block_len: int
    output_len: int
    max_input_length: int
    key_len: int
    # pure side
    spec_s: Callable[[bytes, bytes], bytes]
    init_s: Callable[[bytes], Any]
    update_multi_s: Callable[[Any, int, bytes], Any]
    update_last_s: Callable[[Any, int, bytes], Any]
    finish_s: Callable[[bytes, Any], bytes]
    # imperative side
    state_init: Callable[[bytes], Any]
    state_copy: Callable[[Any], Any]
    update_multi: Callable[[Any, int, Any], None]
    update_last: Callable[[Any, int, Any], None]
    finish: Callable[[bytes, Any], bytes]
    reflect: Callable[[Any], Any]
    buf_multiple: int = 1
    #: per-key digest size, for descriptors whose output size is chosen at run time
    digest_len_for: Callable[[bytes], int] | None = None

    def __post_init__(self) -> None:
        if not 0 < self.max_input_length < U64_LIMIT:
            raise ValueError(f"max_input_length must lie in (0, 2**64), got {self.max_input_length}")
        if self.block_len <= 0 or self.output_len <= 0:
            raise ValueError("block_len and output_len must be positive")
        if self.buf_multiple <= 0:
            raise ValueError(f"buf_multiple must be positive, got {self.buf_multiple}")
        if self.km is KeyManagement.NONE and self.key_len != 0:
            raise ValueError("an algorithm without key management must have key_len 0")

    @property
    def buf_capacity(self) -> int:
        return self.buf_multiple * self.block_len

    def digest_len(self, key: bytes = b"") -> int:
        if self.digest_len_for is None:
            return self.output_len
        return self.digest_len_for(key)

    def check_key(self, key: bytes) -> None:
        if len(key) != self.key_len:
            raise KeyLengthMismatch(
                f"{self.name} expects a {self.key_len}-byte key, got {len(key)} bytes"
            )

    def check_length(self, n: int) -> None:
        if n > self.max_input_length:
            raise InputTooLong(
                f"{n} bytes exceeds the {self.name} limit of {self.max_input_length}"
            )

    def __repr__(self) -> str:
        return (
            f"BlockAlgorithm({self.name!r}, block_len={self.block_len}, "
            f"output_len={self.output_len}, km={self.km.name}, buf_multiple={self.buf_multiple})"
        )


def one_shot(alg: BlockAlgorithm, key: bytes, data: bytes) -> bytes:
    """Evaluate the pure one-shot specification."""
    alg.check_key(key)
    alg.check_length(len(data))
    return alg.spec_s(bytes(key), bytes(data))


def incremental_spec(alg: BlockAlgorithm, key: bytes, data: bytes) -> bytes:
    """Run the pure block transitions over ``data`` the way a block API client would."""
    alg.check_key(key)
    alg.check_length(len(data))
    key = bytes(key)
    blocks, last = split_at_last(alg.block_len, bytes(data))
    h0 = alg.update_multi_s(alg.init_s(key), 0, blocks)
    return alg.finish_s(key, alg.update_last_s(h0, len(blocks), last))
