"""The compiled kernels and their interpreted bodies must agree bit for bit."""
import os
import subprocess
import sys

import numpy as np
import pytest

from blockstream import _jit
from blockstream.algorithms import instance, kernels

MD_KERNELS = [
    ("md5", kernels.md5_blocks, 64),
    ("sha1", kernels.sha1_blocks, 64),
    ("sha256", kernels.sha256_blocks, 64),
    ("sha512", kernels.sha512_blocks, 128),
]


def _data(n, seed):
    return np.random.default_rng(seed).integers(0, 256, n, dtype=np.uint8)


@pytest.mark.parametrize("name, k, block", MD_KERNELS)
def test_md_kernels_agree(name, k, block):
    for nblocks in (0, 1, 3):
        h0 = instance(name).state_init(b"")
        data = _data(nblocks * block, nblocks)
        a, b = h0.copy(), h0.copy()
        k(a, data, nblocks)
        _jit.interpreted(k)(b, data, nblocks)
        assert np.array_equal(a, b)
        if nblocks:
            assert not np.array_equal(a, h0)


@pytest.mark.parametrize("name, k, block", [("blake2s", kernels.blake2s_blocks, 64), ("blake2b", kernels.blake2b_blocks, 128)])
@pytest.mark.parametrize("last", [False, True])
def test_blake2_kernels_agree(name, k, block, last):
    h0 = instance(name).state_init(b"").h
    nblocks = 1 if last else 2
    data = _data(nblocks * block, 7)
    a, b = h0.copy(), h0.copy()
    k(a, data, nblocks, 2**32 - 5, 1, last)
    _jit.interpreted(k)(b, data, nblocks, 2**32 - 5, 1, last)
    assert np.array_equal(a, b)


def test_poly1305_kernel_agrees():
    st = instance("poly1305").state_init(bytes(range(32)))
    data = _data(16 * 5, 3)
    a, b = st.acc.copy(), st.acc.copy()
    kernels.poly1305_blocks(a, st.r, data, 5, 1 << 24)
    _jit.interpreted(kernels.poly1305_blocks)(b, st.r, data, 5, 1 << 24)
    assert np.array_equal(a, b)


def test_jit_flag_reported():
    assert _jit.JIT_ENABLED == (not _jit._disabled())


def test_fallback_mode_end_to_end():
    code = (
        "import hashlib, warnings; warnings.simplefilter('error');"
        "from blockstream import _jit, streaming; from blockstream.algorithms import instance;"
        "assert not _jit.JIT_ENABLED;"
        "d = bytes(range(256)) * 3;"
        "r = {n: streaming.create(instance(n)).update(d).hexdigest() for n in ('md5','sha1','sha256','sha512','blake2s','blake2b')};"
        "assert all(r[n] == hashlib.new(n, d).hexdigest() for n in r), r;"
        "print('ok')"
    )
    env = {**os.environ, "BLOCKSTREAM_DISABLE_JIT": "1"}
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, timeout=300)
    assert out.returncode == 0, out.stderr
    assert out.stdout.strip() == "ok"
