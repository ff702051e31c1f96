"""Compression kernels: the hot inner loops of every shipped algorithm.

Each kernel mutates a small numpy state array in place and walks ``nblocks``
consecutive blocks of a ``uint8`` array. 32-bit algorithms compute on int64
words masked back to 32 bits; 64-bit algorithms compute on wrapping uint64.
The same source runs compiled (numba) or interpreted; see ``blockstream._jit``.

Reference code only: nothing here is constant-time.
"""
from __future__ import annotations

import math

import numpy as np

from blockstream._jit import helper, kernel

M32 = 0xFFFFFFFF

# ---------------------------------------------------------------------------
# constants

MD5_K = np.array(
    [int(abs(math.sin(i + 1)) * 2**32) & M32 for i in range(64)], dtype=np.int64
)
MD5_S = np.array(
    [7, 12, 17, 22] * 4 + [5, 9, 14, 20] * 4 + [4, 11, 16, 23] * 4 + [6, 10, 15, 21] * 4,
    dtype=np.int64,
)

SHA256_K = np.array([
    0x428A2F98, 0x71374491, 0xB5C0FBCF, 0xE9B5DBA5, 0x3956C25B, 0x59F111F1, 0x923F82A4, 0xAB1C5ED5,
    0xD807AA98, 0x12835B01, 0x243185BE, 0x550C7DC3, 0x72BE5D74, 0x80DEB1FE, 0x9BDC06A7, 0xC19BF174,
    0xE49B69C1, 0xEFBE4786, 0x0FC19DC6, 0x240CA1CC, 0x2DE92C6F, 0x4A7484AA, 0x5CB0A9DC, 0x76F988DA,
    0x983E5152, 0xA831C66D, 0xB00327C8, 0xBF597FC7, 0xC6E00BF3, 0xD5A79147, 0x06CA6351, 0x14292967,
    0x27B70A85, 0x2E1B2138, 0x4D2C6DFC, 0x53380D13, 0x650A7354, 0x766A0ABB, 0x81C2C92E, 0x92722C85,
    0xA2BFE8A1, 0xA81A664B, 0xC24B8B70, 0xC76C51A3, 0xD192E819, 0xD6990624, 0xF40E3585, 0x106AA070,
    0x19A4C116, 0x1E376C08, 0x2748774C, 0x34B0BCB5, 0x391C0CB3, 0x4ED8AA4A, 0x5B9CCA4F, 0x682E6FF3,
    0x748F82EE, 0x78A5636F, 0x84C87814, 0x8CC70208, 0x90BEFFFA, 0xA4506CEB, 0xBEF9A3F7, 0xC67178F2,
], dtype=np.int64)

SHA512_K = np.array([
    0x428A2F98D728AE22, 0x7137449123EF65CD, 0xB5C0FBCFEC4D3B2F, 0xE9B5DBA58189DBBC,
    0x3956C25BF348B538, 0x59F111F1B605D019, 0x923F82A4AF194F9B, 0xAB1C5ED5DA6D8118,
    0xD807AA98A3030242, 0x12835B0145706FBE, 0x243185BE4EE4B28C, 0x550C7DC3D5FFB4E2,
    0x72BE5D74F27B896F, 0x80DEB1FE3B1696B1, 0x9BDC06A725C71235, 0xC19BF174CF692694,
    0xE49B69C19EF14AD2, 0xEFBE4786384F25E3, 0x0FC19DC68B8CD5B5, 0x240CA1CC77AC9C65,
    0x2DE92C6F592B0275, 0x4A7484AA6EA6E483, 0x5CB0A9DCBD41FBD4, 0x76F988DA831153B5,
    0x983E5152EE66DFAB, 0xA831C66D2DB43210, 0xB00327C898FB213F, 0xBF597FC7BEEF0EE4,
    0xC6E00BF33DA88FC2, 0xD5A79147930AA725, 0x06CA6351E003826F, 0x142929670A0E6E70,
    0x27B70A8546D22FFC, 0x2E1B21385C26C926, 0x4D2C6DFC5AC42AED, 0x53380D139D95B3DF,
    0x650A73548BAF63DE, 0x766A0ABB3C77B2A8, 0x81C2C92E47EDAEE6, 0x92722C851482353B,
    0xA2BFE8A14CF10364, 0xA81A664BBC423001, 0xC24B8B70D0F89791, 0xC76C51A30654BE30,
    0xD192E819D6EF5218, 0xD69906245565A910, 0xF40E35855771202A, 0x106AA07032BBD1B8,
    0x19A4C116B8D2D0C8, 0x1E376C085141AB53, 0x2748774CDF8EEB99, 0x34B0BCB5E19B48A8,
    0x391C0CB3C5C95A63, 0x4ED8AA4AE3418ACB, 0x5B9CCA4F7763E373, 0x682E6FF3D6B2B8A3,
    0x748F82EE5DEFB2FC, 0x78A5636F43172F60, 0x84C87814A1F0AB72, 0x8CC702081A6439EC,
    0x90BEFFFA23631E28, 0xA4506CEBDE82BDE9, 0xBEF9A3F7B2C67915, 0xC67178F2E372532B,
    0xCA273ECEEA26619C, 0xD186B8C721C0C207, 0xEADA7DD6CDE0EB1E, 0xF57D4F7FEE6ED178,
    0x06F067AA72176FBA, 0x0A637DC5A2C898A6, 0x113F9804BEF90DAE, 0x1B710B35131C471B,
    0x28DB77F523047D84, 0x32CAAB7B40C72493, 0x3C9EBE0A15C9BEBC, 0x431D67C49C100D4C,
    0x4CC5D4BECB3E42B6, 0x597F299CFC657E2A, 0x5FCB6FAB3AD6FAEC, 0x6C44198C4A475817,
], dtype=np.uint64)

BLAKE2B_IV = np.array([
    0x6A09E667F3BCC908, 0xBB67AE8584CAA73B, 0x3C6EF372FE94F82B, 0xA54FF53A5F1D36F1,
    0x510E527FADE682D1, 0x9B05688C2B3E6C1F, 0x1F83D9ABFB41BD6B, 0x5BE0CD19137E2179,
], dtype=np.uint64)

BLAKE2S_IV = np.array([
    0x6A09E667, 0xBB67AE85, 0x3C6EF372, 0xA54FF53A,
    0x510E527F, 0x9B05688C, 0x1F83D9AB, 0x5BE0CD19,
], dtype=np.int64)

BLAKE2_SIGMA = np.array([
    [0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15],
    [14, 10, 4, 8, 9, 15, 13, 6, 1, 12, 0, 2, 11, 7, 5, 3],
    [11, 8, 12, 0, 5, 2, 15, 13, 10, 14, 3, 6, 7, 1, 9, 4],
    [7, 9, 3, 1, 13, 12, 11, 14, 2, 6, 5, 10, 4, 0, 15, 8],
    [9, 0, 5, 7, 2, 4, 10, 15, 14, 1, 11, 12, 6, 8, 3, 13],
    [2, 12, 6, 10, 0, 11, 8, 3, 4, 13, 7, 5, 15, 14, 1, 9],
    [12, 5, 1, 15, 14, 13, 4, 10, 0, 7, 6, 3, 9, 2, 8, 11],
    [13, 11, 7, 14, 12, 1, 3, 9, 5, 0, 15, 4, 8, 6, 2, 10],
    [6, 15, 14, 9, 11, 3, 0, 8, 12, 2, 13, 7, 1, 4, 10, 5],
    [10, 2, 8, 4, 7, 6, 1, 5, 15, 11, 9, 14, 3, 12, 13, 0],
], dtype=np.int64)


# ---------------------------------------------------------------------------
# word helpers


@helper
def _rotl32(x, n):
    return ((x << n) | (x >> (32 - n))) & 0xFFFFFFFF


@helper
def _rotr32(x, n):
    return ((x >> n) | (x << (32 - n))) & 0xFFFFFFFF


@helper
def _rotr64(x, n):
    return (x >> np.uint64(n)) | (x << np.uint64(64 - n))


@helper
def _load32_be(data, i):
    return (
        (np.int64(data[i]) << 24)
        | (np.int64(data[i + 1]) << 16)
        | (np.int64(data[i + 2]) << 8)
        | np.int64(data[i + 3])
    )


@helper
def _load32_le(data, i):
    return (
        np.int64(data[i])
        | (np.int64(data[i + 1]) << 8)
        | (np.int64(data[i + 2]) << 16)
        | (np.int64(data[i + 3]) << 24)
    )


@helper
def _load64_be(data, i):
    x = np.uint64(0)
    for k in range(8):
        x = (x << np.uint64(8)) | np.uint64(data[i + k])
    return x


@helper
def _load64_le(data, i):
    x = np.uint64(0)
    for k in range(7, -1, -1):
        x = (x << np.uint64(8)) | np.uint64(data[i + k])
    return x


# ---------------------------------------------------------------------------
# Merkle-Damgard family


@kernel
def md5_blocks(h, data, nblocks):
    m = np.zeros(16, dtype=np.int64)
    for b in range(nblocks):
        off = b * 64
        for t in range(16):
            m[t] = _load32_le(data, off + 4 * t)
        a = np.int64(h[0])
        bb = np.int64(h[1])
        c = np.int64(h[2])
        d = np.int64(h[3])
        for i in range(64):
            if i < 16:
                f = (bb & c) | (~bb & d)
                g = i
            elif i < 32:
                f = (d & bb) | (~d & c)
                g = (5 * i + 1) % 16
            elif i < 48:
                f = bb ^ c ^ d
                g = (3 * i + 5) % 16
            else:
                f = c ^ (bb | (~d & 0xFFFFFFFF))
                g = (7 * i) % 16
            f = (f + a + MD5_K[i] + m[g]) & 0xFFFFFFFF
            a = d
            d = c
            c = bb
            bb = (bb + _rotl32(f, MD5_S[i])) & 0xFFFFFFFF
        h[0] = (np.int64(h[0]) + a) & 0xFFFFFFFF
        h[1] = (np.int64(h[1]) + bb) & 0xFFFFFFFF
        h[2] = (np.int64(h[2]) + c) & 0xFFFFFFFF
        h[3] = (np.int64(h[3]) + d) & 0xFFFFFFFF


@kernel
def sha1_blocks(h, data, nblocks):
    w = np.zeros(80, dtype=np.int64)
    for b in range(nblocks):
        off = b * 64
        for t in range(16):
            w[t] = _load32_be(data, off + 4 * t)
        for t in range(16, 80):
            w[t] = _rotl32(w[t - 3] ^ w[t - 8] ^ w[t - 14] ^ w[t - 16], 1)
        a = np.int64(h[0])
        bb = np.int64(h[1])
        c = np.int64(h[2])
        d = np.int64(h[3])
        e = np.int64(h[4])
        for t in range(80):
            if t < 20:
                f = (bb & c) | (~bb & d)
                k = 0x5A827999
            elif t < 40:
                f = bb ^ c ^ d
                k = 0x6ED9EBA1
            elif t < 60:
                f = (bb & c) | (bb & d) | (c & d)
                k = 0x8F1BBCDC
            else:
                f = bb ^ c ^ d
                k = 0xCA62C1D6
            tmp = (_rotl32(a, 5) + (f & 0xFFFFFFFF) + e + k + w[t]) & 0xFFFFFFFF
            e = d
            d = c
            c = _rotl32(bb, 30)
            bb = a
            a = tmp
        h[0] = (np.int64(h[0]) + a) & 0xFFFFFFFF
        h[1] = (np.int64(h[1]) + bb) & 0xFFFFFFFF
        h[2] = (np.int64(h[2]) + c) & 0xFFFFFFFF
        h[3] = (np.int64(h[3]) + d) & 0xFFFFFFFF
        h[4] = (np.int64(h[4]) + e) & 0xFFFFFFFF


@kernel
def sha256_blocks(h, data, nblocks):
    w = np.zeros(64, dtype=np.int64)
    v = np.zeros(8, dtype=np.int64)
    for b in range(nblocks):
        off = b * 64
        for t in range(16):
            w[t] = _load32_be(data, off + 4 * t)
        for t in range(16, 64):
            x = w[t - 15]
            y = w[t - 2]
            s0 = _rotr32(x, 7) ^ _rotr32(x, 18) ^ (x >> 3)
            s1 = _rotr32(y, 17) ^ _rotr32(y, 19) ^ (y >> 10)
            w[t] = (w[t - 16] + s0 + w[t - 7] + s1) & 0xFFFFFFFF
        for i in range(8):
            v[i] = h[i]
        for t in range(64):
            e = v[4]
            a = v[0]
            s1 = _rotr32(e, 6) ^ _rotr32(e, 11) ^ _rotr32(e, 25)
            ch = (e & v[5]) ^ (~e & v[6])
            t1 = (v[7] + s1 + ch + SHA256_K[t] + w[t]) & 0xFFFFFFFF
            s0 = _rotr32(a, 2) ^ _rotr32(a, 13) ^ _rotr32(a, 22)
            maj = (a & v[1]) ^ (a & v[2]) ^ (v[1] & v[2])
            t2 = (s0 + maj) & 0xFFFFFFFF
            v[7] = v[6]
            v[6] = v[5]
            v[5] = e
            v[4] = (v[3] + t1) & 0xFFFFFFFF
            v[3] = v[2]
            v[2] = v[1]
            v[1] = a
            v[0] = (t1 + t2) & 0xFFFFFFFF
        for i in range(8):
            h[i] = (np.int64(h[i]) + v[i]) & 0xFFFFFFFF


@kernel
def sha512_blocks(h, data, nblocks):
    w = np.zeros(80, dtype=np.uint64)
    v = np.zeros(8, dtype=np.uint64)
    for b in range(nblocks):
        off = b * 128
        for t in range(16):
            w[t] = _load64_be(data, off + 8 * t)
        for t in range(16, 80):
            x = w[t - 15]
            y = w[t - 2]
            s0 = _rotr64(x, 1) ^ _rotr64(x, 8) ^ (x >> np.uint64(7))
            s1 = _rotr64(y, 19) ^ _rotr64(y, 61) ^ (y >> np.uint64(6))
            w[t] = w[t - 16] + s0 + w[t - 7] + s1
        for i in range(8):
            v[i] = h[i]
        for t in range(80):
            e = v[4]
            a = v[0]
            s1 = _rotr64(e, 14) ^ _rotr64(e, 18) ^ _rotr64(e, 41)
            ch = (e & v[5]) ^ (~e & v[6])
            t1 = v[7] + s1 + ch + SHA512_K[t] + w[t]
            s0 = _rotr64(a, 28) ^ _rotr64(a, 34) ^ _rotr64(a, 39)
            maj = (a & v[1]) ^ (a & v[2]) ^ (v[1] & v[2])
            v[7] = v[6]
            v[6] = v[5]
            v[5] = e
            v[4] = v[3] + t1
            v[3] = v[2]
            v[2] = v[1]
            v[1] = a
            v[0] = t1 + s0 + maj
        for i in range(8):
            h[i] = h[i] + v[i]


# ---------------------------------------------------------------------------
# Blake2


@kernel
def blake2s_blocks(h, data, nblocks, t_lo, t_hi, last):
    """Compress ``nblocks`` blocks; the byte counter before the first is (t_hi, t_lo).

    Every block advances the counter by 64 except a final block, whose
    counter the caller supplies already advanced (``last`` implies nblocks == 1).
    """
    m = np.zeros(16, dtype=np.int64)
    v = np.zeros(16, dtype=np.int64)
    for b in range(nblocks):
        off = b * 64
        if not last:
            t_lo = t_lo + 64
            if t_lo > 0xFFFFFFFF:
                t_lo = t_lo & 0xFFFFFFFF
                t_hi = (t_hi + 1) & 0xFFFFFFFF
        for i in range(16):
            m[i] = _load32_le(data, off + 4 * i)
        for i in range(8):
            v[i] = h[i]
            v[i + 8] = BLAKE2S_IV[i]
        v[12] ^= t_lo
        v[13] ^= t_hi
        if last:
            v[14] ^= 0xFFFFFFFF
        for r in range(10):
            for j in range(8):
                if j < 4:
                    ia, ib, ic, id_ = j, j + 4, j + 8, j + 12
                else:
                    ia = j - 4
                    ib = 4 + (j - 3) % 4
                    ic = 8 + (j - 2) % 4
                    id_ = 12 + (j - 1) % 4
                x = m[BLAKE2_SIGMA[r, 2 * j]]
                y = m[BLAKE2_SIGMA[r, 2 * j + 1]]
                v[ia] = (v[ia] + v[ib] + x) & 0xFFFFFFFF
                v[id_] = _rotr32(v[id_] ^ v[ia], 16)
                v[ic] = (v[ic] + v[id_]) & 0xFFFFFFFF
                v[ib] = _rotr32(v[ib] ^ v[ic], 12)
                v[ia] = (v[ia] + v[ib] + y) & 0xFFFFFFFF
                v[id_] = _rotr32(v[id_] ^ v[ia], 8)
                v[ic] = (v[ic] + v[id_]) & 0xFFFFFFFF
                v[ib] = _rotr32(v[ib] ^ v[ic], 7)
        for i in range(8):
            h[i] = np.int64(h[i]) ^ v[i] ^ v[i + 8]


@kernel
def blake2b_blocks(h, data, nblocks, t_lo, t_hi, last):
    """64-bit twin of ``blake2s_blocks``; counter words are uint64."""
    m = np.zeros(16, dtype=np.uint64)
    v = np.zeros(16, dtype=np.uint64)
    step = np.uint64(128)
    for b in range(nblocks):
        off = b * 128
        if not last:
            t_lo = t_lo + step
            if t_lo < step:
                t_hi = t_hi + np.uint64(1)
        for i in range(16):
            m[i] = _load64_le(data, off + 8 * i)
        for i in range(8):
            v[i] = h[i]
            v[i + 8] = BLAKE2B_IV[i]
        v[12] ^= t_lo
        v[13] ^= t_hi
        if last:
            v[14] = ~v[14]
        for r in range(12):
            s = r % 10
            for j in range(8):
                if j < 4:
                    ia, ib, ic, id_ = j, j + 4, j + 8, j + 12
                else:
                    ia = j - 4
                    ib = 4 + (j - 3) % 4
                    ic = 8 + (j - 2) % 4
                    id_ = 12 + (j - 1) % 4
                x = m[BLAKE2_SIGMA[s, 2 * j]]
                y = m[BLAKE2_SIGMA[s, 2 * j + 1]]
                v[ia] = v[ia] + v[ib] + x
                v[id_] = _rotr64(v[id_] ^ v[ia], 32)
                v[ic] = v[ic] + v[id_]
                v[ib] = _rotr64(v[ib] ^ v[ic], 24)
                v[ia] = v[ia] + v[ib] + y
                v[id_] = _rotr64(v[id_] ^ v[ia], 16)
                v[ic] = v[ic] + v[id_]
                v[ib] = _rotr64(v[ib] ^ v[ic], 63)
        for i in range(8):
            h[i] = h[i] ^ v[i] ^ v[i + 8]


# ---------------------------------------------------------------------------
# Poly1305, 26-bit limbs


@kernel
def poly1305_blocks(acc, r, data, nblocks, hibit):
    """Absorb 16-byte blocks into ``acc``; ``hibit`` is 1 << 24 for full blocks.

    Limbs of ``acc`` stay below 2**27 between calls, so every product fits
    comfortably in int64.
    """
    r0 = r[0]
    r1 = r[1]
    r2 = r[2]
    r3 = r[3]
    r4 = r[4]
    s1 = r1 * 5
    s2 = r2 * 5
    s3 = r3 * 5
    s4 = r4 * 5
    h0 = acc[0]
    h1 = acc[1]
    h2 = acc[2]
    h3 = acc[3]
    h4 = acc[4]
    mask = 0x3FFFFFF
    for b in range(nblocks):
        off = b * 16
        h0 += _load32_le(data, off) & mask
        h1 += (_load32_le(data, off + 3) >> 2) & mask
        h2 += (_load32_le(data, off + 6) >> 4) & mask
        h3 += (_load32_le(data, off + 9) >> 6) & mask
        h4 += (_load32_le(data, off + 12) >> 8) | hibit

        d0 = h0 * r0 + h1 * s4 + h2 * s3 + h3 * s2 + h4 * s1
        d1 = h0 * r1 + h1 * r0 + h2 * s4 + h3 * s3 + h4 * s2
        d2 = h0 * r2 + h1 * r1 + h2 * r0 + h3 * s4 + h4 * s3
        d3 = h0 * r3 + h1 * r2 + h2 * r1 + h3 * r0 + h4 * s4
        d4 = h0 * r4 + h1 * r3 + h2 * r2 + h3 * r1 + h4 * r0

        c = d0 >> 26
        h0 = d0 & mask
        d1 += c
        c = d1 >> 26
        h1 = d1 & mask
        d2 += c
        c = d2 >> 26
        h2 = d2 & mask
        d3 += c
        c = d3 >> 26
        h3 = d3 & mask
        d4 += c
        c = d4 >> 26
        h4 = d4 & mask
        h0 += c * 5
        c = h0 >> 26
        h0 = h0 & mask
        h1 += c
    acc[0] = h0
    acc[1] = h1
    acc[2] = h2
    acc[3] = h3
    acc[4] = h4
