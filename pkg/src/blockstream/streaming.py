"""Safe streaming API over any :class:`~blockstream.block_api.BlockAlgorithm`.

One live state, any number of ``update`` and ``digest`` calls in any order,
``reinit`` to start over and ``release`` when done. Buffering, the
final-block treatment and the copy needed for a non-destructive digest are
handled here, so callers never see the underlying block state machine.

Buffer discipline: with ``C = buf_multiple * block_len`` the internal buffer
always holds the tail of ``split_at_last(C, seen)`` where ``seen`` is
everything fed since the last (re)init. A full buffer is only flushed once
another byte arrives, so the buffer is never empty after nonempty input.
"""
from __future__ import annotations

import threading

from blockstream.block_api import (
    BlockAlgorithm,
    ContractViolation,
    KeyManagement,
    split_at_last,
)

__all__ = [
    "MaximumLengthExceeded",
    "StreamingState",
    "buffered_len",
    "create",
    "digest",
    "live_states",
    "reinit",
    "release",
    "update",
]


class MaximumLengthExceeded(ValueError):
    """An update would push the stream past the algorithm's length limit.

    The state is left exactly as it was before the failing call.
    """


_live = 0
_live_lock = threading.Lock()


def live_states() -> int:
    """Number of created but not yet released states (allocation audit for tests)."""
    return _live


def _track(delta: int) -> None:
    global _live
    with _live_lock:
        _live += delta


class StreamingState:
    """Opaque streaming handle; obtain one from :func:`create`."""

    __slots__ = ("_alg", "_block_state", "_buf", "_buf_filled", "_total_len", "_key", "_live")

    def __init__(self, *args, **kwargs):
        raise TypeError("use blockstream.streaming.create() to obtain a StreamingState")

    @classmethod
    def _new(cls, alg: BlockAlgorithm, key: bytes) -> "StreamingState":
        self = object.__new__(cls)
        self._alg = alg
        self._buf = bytearray(alg.buf_capacity)
        self._live = True
        self._reset(key)
        return self

    def _reset(self, key: bytes) -> None:
        self._alg.check_key(key)
        key = bytes(key)
        self._block_state = self._alg.state_init(key)
        self._buf_filled = 0
        self._total_len = 0
        self._key = key if self._alg.km is KeyManagement.RUNTIME else None

    def _check_live(self) -> None:
        if not self._live:
            raise ContractViolation("streaming state used after release")

    @property
    def algorithm(self) -> BlockAlgorithm:
        return self._alg

    @property
    def total_len(self) -> int:
        self._check_live()
        return self._total_len

    @property
    def digest_size(self) -> int:
        self._check_live()
        return self._alg.digest_len(self._key or b"")

    # methods mirror the module-level functions

    def update(self, data) -> "StreamingState":
        update(self, data)
        return self

    def digest(self, out=None) -> bytes:
        return digest(self, out)

    def hexdigest(self) -> str:
        return digest(self).hex()

    def reinit(self, key: bytes = b"") -> None:
        reinit(self, key)

    def release(self) -> None:
        release(self)

    def __len__(self) -> int:
        return self.total_len

    def __enter__(self) -> "StreamingState":
        return self

    def __exit__(self, *exc) -> None:
        if self._live:
            release(self)

    def __repr__(self) -> str:
        status = f"total_len={self._total_len}" if self._live else "released"
        return f"<StreamingState {self._alg.name} {status}>"


def create(alg: BlockAlgorithm, key: bytes = b"") -> StreamingState:
    """Allocate and initialize a streaming state.

    Raises :class:`~blockstream.block_api.KeyLengthMismatch` if ``key`` is not
    ``alg.key_len`` bytes.
    """
    st = StreamingState._new(alg, key)
    _track(+1)
    return st


def reinit(state: StreamingState, key: bytes = b"") -> None:
    """Forget everything fed so far and start again, possibly under a new key."""
    state._check_live()
    state._reset(key)


def update(state: StreamingState, data) -> None:
    """Feed ``data`` (any bytes-like object) into the stream."""
    state._check_live()
    alg = state._alg
    mv = memoryview(data).cast("B")
    n = len(mv)
    if state._total_len + n > alg.max_input_length:
        raise MaximumLengthExceeded(
            f"{state._total_len} + {n} bytes exceeds the {alg.name} limit of {alg.max_input_length}"
        )
    if n == 0:
        return

    cap = len(state._buf)
    buf = state._buf
    filled = state._buf_filled
    absorbed = state._total_len - filled

    take = min(cap - filled, n)
    buf[filled:filled + take] = mv[:take]
    filled += take
    state._total_len += n
    if take == n:
        state._buf_filled = filled
        return

    # buffer is full and more input follows: flush it, then stream whole units
    # straight from the caller's memory, keeping the last (nonempty) unit
    alg.update_multi(state._block_state, absorbed, buf)
    absorbed += cap
    remaining = mv[take:]
    q, r = divmod(len(remaining), cap)
    whole = (q if r else q - 1) * cap
    if whole:
        alg.update_multi(state._block_state, absorbed, remaining[:whole])
    tail = remaining[whole:]
    buf[:len(tail)] = tail
    state._buf_filled = len(tail)


def digest(state: StreamingState, out=None) -> bytes:
    """Digest of everything fed so far; the state stays usable.

    When ``out`` (a writable buffer of the digest size) is given the digest is
    also written into it.
    """
    state._check_live()
    alg = state._alg
    key = state._key if state._key is not None else b""
    filled = state._buf_filled
    absorbed = state._total_len - filled
    tmp = alg.state_copy(state._block_state)
    blocks, last = split_at_last(alg.block_len, bytes(state._buf[:filled]))
    alg.update_multi(tmp, absorbed, blocks)
    alg.update_last(tmp, absorbed + len(blocks), last)
    result = alg.finish(key, tmp)
    if out is not None:
        view = memoryview(out).cast("B")
        if len(view) != len(result):
            raise ContractViolation(f"output buffer holds {len(view)} bytes, digest is {len(result)}")
        view[:] = result
    return result


def release(state: StreamingState) -> None:
    """Free the state. Any further use, including a second release, is an error."""
    state._check_live()
    state._live = False
    state._block_state = None
    state._buf = bytearray()
    state._key = None
    _track(-1)


def buffered_len(state: StreamingState) -> int:
    """Bytes currently held in the internal buffer."""
    state._check_live()
    return state._buf_filled


def block_state(state: StreamingState):
    """The inner block state. For test harnesses checking the state invariant only."""
    state._check_live()
    return state._block_state
