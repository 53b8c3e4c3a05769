"""Independent reference implementations used to cross-check the fast paths.

Everything here is deliberately slow and structurally unrelated to the
library internals: peasant (shift-and-xor) field multiplication, long
division written in terms of the public scalar ops only, and exhaustive
searches.
"""

from qbanet import gf


def peasant_mul(a: int, b: int, reduction: int = 0x11B) -> int:
    """Carry-less multiply-and-reduce, one bit at a time."""
    acc = 0
    while b:
        if b & 1:
            acc ^= a
        a <<= 1
        if a & 0x100:
            a ^= reduction
        b >>= 1
    return acc


def long_division_mod(dividend: list[int], divisor: list[int]) -> list[int]:
    """Remainder of polynomial long division, coefficients highest first.

    Uses only gf_add / gf_mul / gf_inv on scalars; handles non-monic
    divisors.
    """
    divisor = list(divisor)
    while divisor and divisor[0] == 0:
        divisor.pop(0)
    if not divisor:
        raise ZeroDivisionError("zero divisor")
    rem = list(dividend)
    lead_inv = gf.gf_inv(divisor[0])
    n = len(divisor)
    i = 0
    while len(rem) - i >= n:
        c = rem[i]
        if c != 0:
            factor = gf.gf_mul(c, lead_inv)
            for k, d in enumerate(divisor):
                rem[i + k] = gf.gf_add(rem[i + k], gf.gf_mul(factor, d))
        i += 1
    rem = rem[-(n - 1) :] if n > 1 else []
    while rem and rem[0] == 0:
        rem.pop(0)
    return rem


def has_root(poly: gf.FieldPoly) -> bool:
    """Exhaustive scan of all 256 field elements."""
    return any(poly.eval_at(a) == 0 for a in range(256))


def irreducible_by_root_search(poly: gf.FieldPoly) -> bool:
    """Valid oracle for monic polynomials of degree 2 or 3 only."""
    assert 2 <= poly.degree <= 3
    return not has_root(poly)


def reducible_deg2_set() -> set[tuple[int, int]]:
    """All (b, c) with x^2 + b x + c = (x + u)(x + v) for some u, v."""
    out = set()
    for u in range(256):
        for v in range(u, 256):
            out.add((u ^ v, peasant_mul(u, v)))
    return out


def exhaustive_inverse(a: int) -> int:
    """Multiplicative inverse by scanning the whole field."""
    for b in range(256):
        if peasant_mul(a, b) == 1:
            return b
    raise ValueError("no inverse found")
