"""Compiled inner loops for polynomial arithmetic over GF(256).

Polynomials are numpy uint8 arrays indexed by degree (coefficient of
x^k at index k), trimmed so the last entry is the nonzero leading
coefficient.  Every kernel receives the multiplication/inverse/square
tables explicitly so the compiled code stays free of globals.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def poly_mul(a, b, mul):
    """Schoolbook product of two nonzero polynomials."""
    da = a.shape[0] - 1
    db = b.shape[0] - 1
    out = np.zeros(da + db + 1, dtype=np.uint8)
    for i in range(da + 1):
        c = a[i]
        if c != 0:
            for j in range(db + 1):
                out[i + j] ^= mul[c, b[j]]
    return out


@njit(cache=True)
def poly_mod(dividend, divisor, mul, inv):
    """Remainder of dividend mod divisor (divisor need not be monic).

    Returns an untrimmed array of length deg(divisor); the caller strips
    leading zeros.
    """
    dd = dividend.shape[0] - 1
    dv = divisor.shape[0] - 1
    if dv == 0:
        return np.zeros(1, dtype=np.uint8)
    r = dividend.copy()
    lead_inv = inv[divisor[dv]]
    for i in range(dd, dv - 1, -1):
        c = r[i]
        if c != 0:
            f = mul[c, lead_inv]
            for k in range(dv + 1):
                r[i - dv + k] ^= mul[f, divisor[k]]
    return r[:dv]


@njit(cache=True)
def _gcd_degree(a, da, b, db, mul, inv):
    """Degree of gcd(a, b); both work arrays are clobbered."""
    while db >= 0:
        lead_inv = inv[b[db]]
        while da >= db:
            c = a[da]
            if c != 0:
                f = mul[c, lead_inv]
                for k in range(db + 1):
                    a[da - db + k] ^= mul[f, b[k]]
            da -= 1
            while da >= 0 and a[da] == 0:
                da -= 1
            if da < 0:
                break
        t = a
        a = b
        b = t
        td = da
        da = db
        db = td
    return da


@njit(cache=True)
def reduction_rows(p, mul):
    """Rows x^(d+j) mod p for j = 0..d-2, given monic p of degree d >= 2."""
    d = p.shape[0] - 1
    rows = np.zeros((d - 1, d), dtype=np.uint8)
    for k in range(d):
        rows[0, k] = p[k]
    for j in range(1, d - 1):
        c = rows[j - 1, d - 1]
        rows[j, 0] = 0
        for k in range(1, d):
            rows[j, k] = rows[j - 1, k - 1]
        if c != 0:
            for k in range(d):
                rows[j, k] ^= mul[c, p[k]]
    return rows


@njit(cache=True)
def _square_mod(f, rows, mul, sqr, out, wide):
    """out = f^2 mod p where rows = reduction_rows(p).  f has length d."""
    d = f.shape[0]
    for k in range(2 * d - 1):
        wide[k] = 0
    for i in range(d):
        wide[2 * i] = sqr[f[i]]
    for k in range(d):
        out[k] = wide[k]
    for e in range(d, 2 * d - 1):
        c = wide[e]
        if c != 0:
            j = e - d
            for k in range(d):
                out[k] ^= mul[c, rows[j, k]]


@njit(cache=True)
def modmul(a, b, rows, mul):
    """(a*b) mod p for a, b of length d, rows = reduction_rows(p)."""
    d = a.shape[0]
    wide = np.zeros(2 * d - 1, dtype=np.uint8)
    for i in range(d):
        c = a[i]
        if c != 0:
            for j in range(d):
                wide[i + j] ^= mul[c, b[j]]
    out = np.zeros(d, dtype=np.uint8)
    for k in range(d):
        out[k] = wide[k]
    for e in range(d, 2 * d - 1):
        c = wide[e]
        if c != 0:
            j = e - d
            for k in range(d):
                out[k] ^= mul[c, rows[j, k]]
    return out


@njit(cache=True)
def is_irreducible(p, mul, inv, sqr):
    """Deterministic irreducibility test for monic p over GF(256).

    Walks the Frobenius chain F_i = x^(256^i) mod p, rejecting early
    when gcd(F_i - x, p) turns nontrivial (which certifies a factor of
    degree dividing i), and finally requires x^(256^d) == x together
    with trivial gcds at every i <= d/2 that divides d.  gcds are
    evaluated at i = 1..8 and at each divisor of d up to d/2; the chain
    itself is exact, the small-i gcds only shortcut reducible inputs.
    """
    d = p.shape[0] - 1
    if d == 1:
        return True
    rows = reduction_rows(p, mul)
    F = np.zeros(d, dtype=np.uint8)
    F[1] = 1
    out = np.zeros(d, dtype=np.uint8)
    wide = np.zeros(2 * d - 1, dtype=np.uint8)
    ga = np.zeros(d + 1, dtype=np.uint8)
    gb = np.zeros(d + 1, dtype=np.uint8)
    half = d // 2
    for i in range(1, d + 1):
        for _ in range(8):
            _square_mod(F, rows, mul, sqr, out, wide)
            for k in range(d):
                F[k] = out[k]
        if i <= half and (i <= 8 or d % i == 0):
            for k in range(d):
                ga[k] = F[k]
            ga[1] ^= 1
            ga[d] = 0
            dga = d - 1
            while dga >= 0 and ga[dga] == 0:
                dga -= 1
            if dga < 0:
                # x^(256^i) == x with i < d: every factor has degree
                # dividing i, so p cannot be irreducible of degree d.
                return False
            for k in range(d + 1):
                gb[k] = p[k]
            if _gcd_degree(gb, d, ga, dga, mul, inv) > 0:
                return False
    if F[1] != 1:
        return False
    for k in range(d):
        if k != 1 and F[k] != 0:
            return False
    return True


@njit(cache=True)
def minimal_polynomial(theta, rows, mul, inv):
    """Minimal polynomial of theta in GF(256)[x]/(p), p of degree d.

    rows = reduction_rows(p).  Returns (coeffs, m) with coeffs holding a
    monic polynomial of degree m <= d in positions 0..m; m is the least
    exponent with theta^m linearly dependent on lower powers.
    """
    d = theta.shape[0]
    pows = np.zeros((d + 1, d), dtype=np.uint8)
    pows[0, 0] = 1
    cur = np.zeros(d, dtype=np.uint8)
    cur[0] = 1
    for i in range(1, d + 1):
        cur = modmul(cur, theta, rows, mul)
        for k in range(d):
            pows[i, k] = cur[k]

    basis = np.zeros((d + 1, d), dtype=np.uint8)
    trans = np.zeros((d + 1, d + 1), dtype=np.uint8)
    pivots = np.full(d + 1, -1, dtype=np.int64)
    nrows = 0
    for m in range(d + 1):
        row = pows[m].copy()
        comb = np.zeros(d + 1, dtype=np.uint8)
        comb[m] = 1
        for r in range(nrows):
            pc = pivots[r]
            c = row[pc]
            if c != 0:
                f = mul[c, inv[basis[r, pc]]]
                for k in range(d):
                    row[k] ^= mul[f, basis[r, k]]
                for k in range(d + 1):
                    comb[k] ^= mul[f, trans[r, k]]
        pc = -1
        for k in range(d):
            if row[k] != 0:
                pc = k
                break
        if pc == -1:
            return comb, m
        basis[nrows] = row
        trans[nrows] = comb
        pivots[nrows] = pc
        nrows += 1
    return np.zeros(d + 1, dtype=np.uint8), -1
