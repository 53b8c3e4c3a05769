"""Lookup tables for GF(256) arithmetic.

The field is GF(2)[y] modulo y^8 + y^4 + y^3 + y + 1, i.e. reduction
polynomial 0x11B.  All fast paths go through the EXP/LOG and full
256x256 MUL tables built here once at import time.
"""

import numpy as np

# Degree-8 reduction polynomial, pinned: x^8 + x^4 + x^3 + x + 1.
REDUCTION_POLY = 0x11B

# 0x03 = x + 1 generates the multiplicative group under 0x11B.
GENERATOR = 0x03


def _xtime(v: int) -> int:
    v <<= 1
    if v & 0x100:
        v ^= REDUCTION_POLY
    return v & 0xFF


def _build_tables():
    exp = np.zeros(510, dtype=np.uint8)
    log = np.zeros(256, dtype=np.int64)
    v = 1
    for i in range(255):
        exp[i] = v
        log[v] = i
        v ^= _xtime(v)  # multiply by GENERATOR = x + 1
    exp[255:510] = exp[0:255]

    mul = np.zeros((256, 256), dtype=np.uint8)
    idx = log[1:, None] + log[None, 1:]
    mul[1:, 1:] = exp[idx]

    inv = np.zeros(256, dtype=np.uint8)
    inv[1:] = exp[255 - log[1:]]

    sqr = mul[np.arange(256), np.arange(256)].copy()
    return exp, log, mul, inv, sqr


EXP, LOG, MUL, INV, SQR = _build_tables()
