import itertools
import random

import pytest

from blockstream.block_api import (
    BlockAlgorithm,
    ContractViolation,
    KeyManagement,
    derive_update_multi,
    incremental_spec,
    one_shot,
    split_at_last,
)
from blockstream.algorithms import instance
from helpers import SHIPPED, random_key, shipped, toy_algorithm


@pytest.mark.parametrize(
    "n, want_blocks",
    [(0, 0), (64, 0), (65, 64), (128, 64), (1, 0), (63, 0), (129, 128)],
)
def test_split_at_last_examples(n, want_blocks):
    data = bytes(range(256))[:n] if n <= 256 else bytes(n)
    blocks, rest = split_at_last(64, data)
    assert len(blocks) == want_blocks
    assert blocks + rest == data


@pytest.mark.parametrize("unit", [1, 16, 64, 128])
def test_split_at_last_invariants_exhaustive(unit):
    for n in range(4 * unit + 2):
        data = bytes(i % 251 for i in range(n))
        blocks, rest = split_at_last(unit, data)
        assert blocks + rest == data
        assert len(blocks) % unit == 0
        assert len(rest) <= unit
        assert (len(rest) > 0) == (n > 0)


def test_split_at_last_rejects_zero_unit():
    with pytest.raises(ContractViolation):
        split_at_last(0, b"abc")


def test_derive_update_multi_basics():
    seen = []

    def step(st, prevlen, block):
        seen.append((prevlen, block))
        return st + block[0]

    multi = derive_update_multi(2, step)
    assert multi(7, 10, b"") == 7
    assert seen == []
    assert multi(7, 10, b"\x05\x00") == step(7, 10, b"\x05\x00")
    seen.clear()
    multi(0, 4, b"abcdef")
    assert [p for p, _ in seen] == [4, 6, 8]
    with pytest.raises(ContractViolation):
        multi(0, 0, b"abc")


def test_fold_law_toy_two_block_patterns():
    alg = toy_algorithm()
    for b1, b2 in itertools.product(range(256), repeat=2):
        s = alg.update_multi_s(1, 0, bytes([b1]))
        assert alg.update_multi_s(s, 1, bytes([b2])) == alg.update_multi_s(1, 0, bytes([b1, b2]))


def test_fold_law_toy_exhaustive_splits():
    alg = toy_algorithm()
    rng = random.Random(3)
    for n in range(9):
        for _ in range(20):
            data = rng.randbytes(n)
            for cut in range(n + 1):
                for l1 in (0, 5):
                    whole = alg.update_multi_s(1, l1, data)
                    parts = alg.update_multi_s(alg.update_multi_s(1, l1, data[:cut]), l1 + cut, data[cut:])
                    assert whole == parts


def test_incremental_toy_exhaustive_small():
    alg = toy_algorithm()
    for n in range(4):
        for data in itertools.product(range(256), repeat=n) if n < 3 else ():
            d = bytes(data)
            assert incremental_spec(alg, b"", d) == one_shot(alg, b"", d)
    rng = random.Random(0)
    for n in range(9):
        d = rng.randbytes(n)
        assert incremental_spec(alg, b"", d) == one_shot(alg, b"", d)


@pytest.mark.parametrize("name", [*SHIPPED, "agile"])
def test_incremental_equals_one_shot(name):
    rng = random.Random(name)
    for bm in (1, 2):
        alg = shipped(bm)[name]
        for _ in range(15):
            key = random_key(alg, rng)
            d = rng.randbytes(rng.randint(0, 4 * alg.buf_capacity))
            assert incremental_spec(alg, key, d) == one_shot(alg, key, d)


@pytest.mark.parametrize("name", [*SHIPPED, "agile"])
def test_refinement_imperative_matches_pure(name):
    alg = shipped()[name]
    rng = random.Random(name + "refine")
    for _ in range(10):
        key = random_key(alg, rng)
        pure = alg.init_s(key)
        st = alg.state_init(key)
        assert alg.reflect(st) == pure
        prevlen = 0
        for _ in range(rng.randint(0, 3)):
            blocks = rng.randbytes(alg.block_len * rng.randint(0, 3))
            pure = alg.update_multi_s(pure, prevlen, blocks)
            alg.update_multi(st, prevlen, blocks)
            prevlen += len(blocks)
            assert alg.reflect(st) == pure
        last = rng.randbytes(rng.randint(1, alg.block_len))
        pure = alg.update_last_s(pure, prevlen, last)
        alg.update_last(st, prevlen, last)
        assert alg.reflect(st) == pure
        assert alg.finish(key, st) == alg.finish_s(key, pure)


def test_one_shot_examples():
    assert one_shot(instance("sha256"), b"", b"").hex() == (
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
    )
    key = bytes.fromhex("85d6be7857556d337f4452fe42d506a80103808afb0db2fd4abff6af4149f51b")
    tag = one_shot(instance("poly1305"), key, b"Cryptographic Forum Research Group")
    assert tag.hex() == "a8061dc1305136c6c22b8baf0c0127a9"
    assert one_shot(instance("blake2b"), b"", b"abc")[:8] == bytes.fromhex("ba80a53f981c4d0d")


def test_incremental_sha256_abc():
    alg = instance("sha256")
    assert incremental_spec(alg, b"", b"abc") == one_shot(alg, b"", b"abc")


def test_descriptor_validation():
    good = toy_algorithm()
    fields = {f: getattr(good, f) for f in good.__dataclass_fields__}
    for bad in ({"max_input_length": 0}, {"max_input_length": 2**64}, {"block_len": 0}, {"buf_multiple": 0},
                {"key_len": 3}):
        with pytest.raises(ValueError):
            BlockAlgorithm(**{**fields, **bad})
    assert BlockAlgorithm(**{**fields, "km": KeyManagement.RUNTIME, "key_len": 3}).key_len == 3
