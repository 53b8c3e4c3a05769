"""One-time universal-hash digital signatures over XOR-correlated keys.

Signing maps the message bytes to a polynomial M(x) over GF(256)
(first byte = highest coefficient), draws a fresh monic irreducible
divisor p(x) of degree n = l/8, and computes the digest

    Dig = M(x) * x^n  mod  p(x)

serialized as n bytes.  Digest and divisor are one-time-pad encrypted
with two l-bit key blocks: Sig = Dig xor X, p = ser(p_a) xor Y.  A
verifier who recovers the signer's X and Y (by XORing the two
lieutenants' disclosed blocks) decrypts, recomputes the digest, and
accepts iff the digests match bit for bit and the decrypted divisor is
irreducible.  Key blocks are strictly single-use.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from . import gf
from .gf import FieldPoly

ROLE_X = "X"
ROLE_Y = "Y"

DEFAULT_L = 512


class ProtocolError(Exception):
    """A party violated the protocol contract (key reuse, role mix-up, ...)."""


def xor_bytes(a: bytes, b: bytes) -> bytes:
    if len(a) != len(b):
        raise ProtocolError(f"length mismatch: {len(a)} vs {len(b)} bytes")
    n = len(a)
    return (int.from_bytes(a, "big") ^ int.from_bytes(b, "big")).to_bytes(n, "big")


@dataclass
class KeyBlock:
    """An l-bit one-time key string held by one party.

    `bits` is l/8 bytes; `role` is "X" (digest pad) or "Y" (divisor pad);
    `round` is the signing round (1 or 2) the block belongs to.
    """

    bits: bytes
    owner: str
    role: str
    round: int
    consumed: bool = field(default=False, compare=False)

    def __post_init__(self):
        if self.role not in (ROLE_X, ROLE_Y):
            raise ProtocolError(f"unknown key role: {self.role!r}")
        if len(self.bits) == 0:
            raise ProtocolError("key block must hold at least one byte")

    @property
    def length_bits(self) -> int:
        return 8 * len(self.bits)

    def consume(self) -> bytes:
        """Spend the block; a second call is a one-time-pad violation."""
        if self.consumed:
            raise ProtocolError(
                f"key block reuse: {self.owner}/{self.role}/round{self.round}"
            )
        self.consumed = True
        return self.bits


@dataclass(frozen=True)
class SignaturePackage:
    """The transmitted triple {M, Sig, p} plus the signing round."""

    message: bytes
    sig: bytes
    p: bytes
    round: int

    def to_bytes(self) -> bytes:
        """Canonical layout: msglen(4, BE) | message | Sig | p | round(1)."""
        if len(self.sig) != len(self.p):
            raise ProtocolError("Sig and p must have equal length")
        return (
            len(self.message).to_bytes(4, "big")
            + self.message
            + self.sig
            + self.p
            + bytes([self.round & 0xFF])
        )

    @classmethod
    def from_bytes(cls, raw: bytes) -> "SignaturePackage":
        if len(raw) < 5:
            raise ValueError("truncated package")
        mlen = int.from_bytes(raw[:4], "big")
        body = raw[4:-1]
        if len(body) < mlen or (len(body) - mlen) % 2 != 0:
            raise ValueError("package framing does not add up")
        half = (len(body) - mlen) // 2
        return cls(
            message=body[:mlen],
            sig=body[mlen : mlen + half],
            p=body[mlen + half :],
            round=raw[-1],
        )


def encode_message(message: bytes) -> FieldPoly:
    """Message bytes as polynomial coefficients, first byte highest degree."""
    return FieldPoly(message)


def _raw_digest(m: FieldPoly, p: FieldPoly) -> bytes:
    n = p.degree
    return gf.poly_mod(m.shift(n), p).to_bytes_fixed(n)


def hash_digest(m: FieldPoly, p: FieldPoly) -> bytes:
    """Digest m(x)*x^n mod p(x), serialized as n = deg(p) bytes.

    p must be monic irreducible of degree >= 1.
    """
    if not p.is_monic() or p.degree < 1:
        raise ValueError("hash divisor must be monic of degree >= 1")
    if not gf.is_irreducible(p):
        raise ValueError("hash divisor must be irreducible")
    return _raw_digest(m, p)


def sign(
    message: bytes,
    x_key: KeyBlock,
    y_key: KeyBlock,
    rng: np.random.Generator,
) -> SignaturePackage:
    """Sign a message, consuming one X and one Y key block of the same round."""
    if x_key.role != ROLE_X or y_key.role != ROLE_Y:
        raise ProtocolError(
            f"role mismatch: got {x_key.role}/{y_key.role}, need X/Y"
        )
    if x_key.round != y_key.round:
        raise ProtocolError("X and Y blocks must belong to the same round")
    if len(x_key.bits) != len(y_key.bits):
        raise ProtocolError("X and Y blocks must have equal length")
    if x_key.consumed or y_key.consumed:
        raise ProtocolError("refusing to sign with a consumed key block")
    n = len(x_key.bits)
    p_a = gf.sample_irreducible(n, rng)
    dig = hash_digest(encode_message(message), p_a)
    sig = xor_bytes(dig, x_key.consume())
    p_enc = xor_bytes(p_a.to_key_bytes(), y_key.consume())
    return SignaturePackage(message=message, sig=sig, p=p_enc, round=x_key.round)


def recover_signer_key(k_b: KeyBlock, k_c: KeyBlock) -> bytes:
    """XOR two lieutenants' blocks of matching role/round into the signer's."""
    if k_b.role != k_c.role:
        raise ProtocolError(f"role mismatch: {k_b.role} vs {k_c.role}")
    if k_b.round != k_c.round:
        raise ProtocolError(f"round mismatch: {k_b.round} vs {k_c.round}")
    if len(k_b.bits) != len(k_c.bits):
        raise ProtocolError("length mismatch between key blocks")
    return xor_bytes(k_b.bits, k_c.bits)


def verify(pkg: SignaturePackage, x_rec: bytes, y_rec: bytes) -> bool:
    """Check a package against recovered signer pads; total, never raises.

    Rejects on digest mismatch before testing irreducibility of the
    recovered divisor, and rejects any malformed input.
    """
    try:
        if len(pkg.sig) != len(pkg.p) or len(pkg.sig) == 0:
            return False
        if len(x_rec) != len(pkg.sig) or len(y_rec) != len(pkg.p):
            return False
        p_a = FieldPoly.from_key_bytes(xor_bytes(pkg.p, y_rec))
        expected = xor_bytes(pkg.sig, x_rec)
        actual = _raw_digest(encode_message(pkg.message), p_a)
        if actual != expected:
            return False
        return gf.is_irreducible(p_a)
    except Exception:
        return False


def tampered(pkg: SignaturePackage, message: Optional[bytes] = None) -> SignaturePackage:
    """Copy of a package with its message substituted (adversary helper)."""
    if message is None:
        message = pkg.message
    return replace(pkg, message=message)
