"""Throughput of each compression kernel, numba-compiled vs interpreted numpy.

    python3 benchmarks/bench_kernels.py [--kib 64] [--repeat 3]

The interpreted column runs the very same function bodies without
compilation (what BLOCKSTREAM_DISABLE_JIT=1 selects). Outputs are checked to
match before timings are reported.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from blockstream import _jit
from blockstream.algorithms import instance, kernels


def _cases(n_bytes: int):
    rng = np.random.default_rng(0)

    def data(block):
        nblocks = max(1, n_bytes // block)
        return rng.integers(0, 256, nblocks * block, dtype=np.uint8), nblocks

    for name, k, block in (("md5", kernels.md5_blocks, 64), ("sha1", kernels.sha1_blocks, 64),
                           ("sha256", kernels.sha256_blocks, 64), ("sha512", kernels.sha512_blocks, 128)):
        d, n = data(block)
        h0 = instance(name).state_init(b"")
        yield name, k, (lambda h0=h0: (h0.copy(),)), (d, n)
    for name, k, block in (("blake2s", kernels.blake2s_blocks, 64), ("blake2b", kernels.blake2b_blocks, 128)):
        d, n = data(block)
        h0 = instance(name).state_init(b"").h
        yield name, k, (lambda h0=h0: (h0.copy(),)), (d, n, 0, 0, False)
    d, n = data(16)
    st = instance("poly1305").state_init(bytes(range(32)))
    yield "poly1305", kernels.poly1305_blocks, (lambda: (st.acc.copy(), st.r)), (d, n, 1 << 24)


def _best(fn, fresh, tail, repeat: int) -> tuple[float, tuple]:
    best, out = float("inf"), None
    for _ in range(repeat):
        args = fresh()
        t0 = time.perf_counter()
        fn(*args, *tail)
        best = min(best, time.perf_counter() - t0)
        out = args
    return best, out


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--kib", type=int, default=64, help="input size per kernel call")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if not _jit.JIT_ENABLED:
        print("numba disabled (BLOCKSTREAM_DISABLE_JIT set or numba missing): both columns are interpreted")

    mib = args.kib / 1024
    print(f"{'kernel':<10}{'jit MiB/s':>12}{'numpy MiB/s':>14}{'speedup':>10}")
    for name, k, fresh, tail in _cases(args.kib * 1024):
        k(*fresh(), *tail)  # compile outside the timed region
        t_jit, out_jit = _best(k, fresh, tail, args.repeat)
        t_py, out_py = _best(_jit.interpreted(k), fresh, tail, 1)
        assert all(np.array_equal(a, b) for a, b in zip(out_jit, out_py)), name
        print(f"{name:<10}{mib / t_jit:>12.1f}{mib / t_py:>14.3f}{t_py / t_jit:>9.0f}x")


if __name__ == "__main__":
    main()
