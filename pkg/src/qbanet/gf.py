"""GF(256) field elements and polynomials over GF(256).

Field elements are plain ints in [0, 255], read as degree-<8 binary
polynomials and reduced modulo the pinned polynomial
x^8 + x^4 + x^3 + x + 1 (``REDUCTION_POLY`` = 0x11B).  Addition is XOR;
multiplication and inversion go through precomputed tables.

``FieldPoly`` wraps a polynomial with GF(256) coefficients, stored
highest-degree first with no leading zeros.  The zero polynomial has
the sentinel degree -1.  A monic polynomial of degree n serializes to
exactly n byte-coefficients (highest first, leading 1 implicit), so a
degree-64 divisor occupies 64 bytes = 512 bits.

Irreducibility is decided by a deterministic Rabin-style criterion
(Frobenius chain with gcd conditions), and ``sample_irreducible`` draws
uniformly from the monic irreducibles of a given degree.
"""

from __future__ import annotations

from typing import Iterable

import numpy as np

from . import _kernels
from ._tables import INV, MUL, REDUCTION_POLY, SQR

__all__ = [
    "REDUCTION_POLY",
    "FieldPoly",
    "gf_add",
    "gf_mul",
    "gf_inv",
    "poly_mod",
    "is_irreducible",
    "sample_irreducible",
]


def _check_element(a: int) -> int:
    if not 0 <= a <= 255:
        raise ValueError(f"field element out of range: {a!r}")
    return a


def gf_add(a: int, b: int) -> int:
    """Field addition: bitwise XOR."""
    return _check_element(a) ^ _check_element(b)


def gf_mul(a: int, b: int) -> int:
    """Field multiplication modulo REDUCTION_POLY."""
    return int(MUL[_check_element(a), _check_element(b)])


def gf_inv(a: int) -> int:
    """Multiplicative inverse; zero has none."""
    if _check_element(a) == 0:
        raise ValueError("zero has no multiplicative inverse")
    return int(INV[a])


class FieldPoly:
    """Immutable polynomial over GF(256), coefficients highest-degree first."""

    __slots__ = ("_coeffs", "_irr")

    def __init__(self, coeffs: Iterable[int] = ()):
        cs = [_check_element(int(c)) for c in coeffs]
        i = 0
        while i < len(cs) and cs[i] == 0:
            i += 1
        self._coeffs: tuple[int, ...] = tuple(cs[i:])
        self._irr: bool | None = None

    @classmethod
    def zero(cls) -> "FieldPoly":
        return cls(())

    @classmethod
    def x_pow(cls, n: int) -> "FieldPoly":
        """The monomial x^n."""
        if n < 0:
            raise ValueError("exponent must be nonnegative")
        return cls((1,) + (0,) * n)

    @classmethod
    def from_low_array(cls, arr: np.ndarray) -> "FieldPoly":
        """Build from a lowest-degree-first uint8 array."""
        return cls(int(c) for c in arr[::-1])

    @classmethod
    def from_key_bytes(cls, data: bytes) -> "FieldPoly":
        """Deserialize a monic polynomial, re-attaching the implicit leading 1."""
        if len(data) == 0:
            raise ValueError("empty serialization has no degree")
        return cls((1,) + tuple(data))

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self._coeffs

    @property
    def degree(self) -> int:
        """Degree; -1 is the sentinel for the zero polynomial."""
        return len(self._coeffs) - 1

    def is_zero(self) -> bool:
        return not self._coeffs

    def is_monic(self) -> bool:
        return bool(self._coeffs) and self._coeffs[0] == 1

    def _low(self) -> np.ndarray:
        """Lowest-degree-first array for the compiled kernels."""
        return np.array(self._coeffs[::-1], dtype=np.uint8)

    def __eq__(self, other) -> bool:
        return isinstance(other, FieldPoly) and self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash(self._coeffs)

    def __add__(self, other: "FieldPoly") -> "FieldPoly":
        a, b = self._coeffs, other._coeffs
        if len(a) < len(b):
            a, b = b, a
        pad = len(a) - len(b)
        return FieldPoly(
            tuple(a[:pad]) + tuple(x ^ y for x, y in zip(a[pad:], b))
        )

    def __mul__(self, other: "FieldPoly") -> "FieldPoly":
        if self.is_zero() or other.is_zero():
            return FieldPoly.zero()
        out = _kernels.poly_mul(self._low(), other._low(), MUL)
        return FieldPoly.from_low_array(out)

    def __mod__(self, divisor: "FieldPoly") -> "FieldPoly":
        return poly_mod(self, divisor)

    def shift(self, n: int) -> "FieldPoly":
        """Multiply by x^n."""
        if n < 0:
            raise ValueError("shift must be nonnegative")
        if self.is_zero():
            return self
        return FieldPoly(self._coeffs + (0,) * n)

    def eval_at(self, x: int) -> int:
        """Horner evaluation at a field element."""
        _check_element(x)
        acc = 0
        for c in self._coeffs:
            acc = int(MUL[acc, x]) ^ c
        return acc

    def to_key_bytes(self) -> bytes:
        """Serialize a monic polynomial of degree n to n bytes (lead implicit)."""
        if not self.is_monic() or self.degree < 1:
            raise ValueError("only monic polynomials of degree >= 1 serialize")
        return bytes(self._coeffs[1:])

    def to_bytes_fixed(self, n: int) -> bytes:
        """Serialize as exactly n coefficients, highest first, zero-padded."""
        if self.degree >= n:
            raise ValueError(f"degree {self.degree} does not fit in {n} coefficients")
        return bytes(n - len(self._coeffs)) + bytes(self._coeffs)

    def __repr__(self) -> str:
        if self.is_zero():
            return "FieldPoly(0)"
        hexed = " ".join(f"{c:02X}" for c in self._coeffs)
        return f"FieldPoly(deg={self.degree}: {hexed})"


def poly_mod(dividend: FieldPoly, divisor: FieldPoly) -> FieldPoly:
    """Remainder of dividend mod divisor in GF(256)[x]."""
    if divisor.is_zero():
        raise ValueError("division by the zero polynomial")
    if divisor.degree == 0:
        return FieldPoly.zero()
    if dividend.degree < divisor.degree:
        return dividend
    out = _kernels.poly_mod(dividend._low(), divisor._low(), MUL, INV)
    return FieldPoly.from_low_array(out)


def is_irreducible(p: FieldPoly) -> bool:
    """True iff monic p of degree >= 1 has no nontrivial factor over GF(256)."""
    if not p.is_monic() or p.degree < 1:
        raise ValueError("irreducibility is defined here for monic polynomials of degree >= 1")
    if p._irr is None:
        p._irr = bool(_kernels.is_irreducible(p._low(), MUL, INV, SQR))
    return p._irr


def _mark_irreducible(p: FieldPoly) -> FieldPoly:
    p._irr = True
    return p


def _rejection_sample(degree: int, rng: np.random.Generator) -> tuple[FieldPoly, int]:
    """Uniform monic irreducible via accept/reject; also returns the try count."""
    tries = 0
    while True:
        tries += 1
        low = np.empty(degree + 1, dtype=np.uint8)
        low[:degree] = rng.integers(0, 256, degree, dtype=np.uint8)
        low[degree] = 1
        if _kernels.is_irreducible(low, MUL, INV, SQR):
            return _mark_irreducible(FieldPoly.from_low_array(low)), tries


_AMBIENT: dict[int, np.ndarray] = {}


def _ambient_rows(degree: int) -> np.ndarray:
    """Reduction rows of a fixed degree-`degree` irreducible, cached per degree.

    The modulus is drawn from an internal constant-seeded stream so it never
    depends on caller state.
    """
    rows = _AMBIENT.get(degree)
    if rows is None:
        boot = np.random.default_rng(0x1B2B + degree)
        p, _ = _rejection_sample(degree, boot)
        rows = _kernels.reduction_rows(p._low(), MUL)
        _AMBIENT[degree] = rows
    return rows


def _minpoly_sample(degree: int, rng: np.random.Generator) -> FieldPoly:
    """Uniform monic irreducible as the minimal polynomial of a random element.

    A uniform element of the degree-`degree` extension of GF(256) has an
    irreducible minimal polynomial whose degree divides `degree`; every
    degree-`degree` irreducible has exactly `degree` roots there, so
    conditioning on full degree (a redraw with probability ~256^(-degree/2))
    leaves the uniform distribution intact.
    """
    rows = _ambient_rows(degree)
    while True:
        theta = rng.integers(0, 256, degree, dtype=np.uint8)
        coeffs, m = _kernels.minimal_polynomial(theta, rows, MUL, INV)
        if m == degree:
            return _mark_irreducible(FieldPoly.from_low_array(coeffs))


# Above this degree the accept/reject loop costs ~degree full tests per
# draw, so the minimal-polynomial construction takes over.
_REJECTION_MAX_DEGREE = 12


def sample_irreducible(
    degree: int, rng: np.random.Generator, method: str = "auto"
) -> FieldPoly:
    """Draw a uniformly random monic irreducible of the given degree.

    Deterministic for a given generator state.  ``method`` is "rejection",
    "minpoly", or "auto" (rejection up to degree 12, minimal-polynomial
    construction beyond); both methods sample the same uniform distribution.
    """
    if degree < 1:
        raise ValueError("degree must be >= 1")
    if method == "auto":
        method = "rejection" if degree <= _REJECTION_MAX_DEGREE else "minpoly"
    if method == "rejection":
        return _rejection_sample(degree, rng)[0]
    if method == "minpoly":
        if degree == 1:
            return _rejection_sample(degree, rng)[0]
        return _minpoly_sample(degree, rng)
    raise ValueError(f"unknown sampling method: {method!r}")
