"""Simulated entanglement-based key links and three-party key blocks.

Each link models one entangled pair channel: per pair event both ends
draw an independent uniform basis bit (Z or X), mismatched bases are
sifted away (expected survival 1/2), and surviving outcomes disagree
independently with the configured per-basis error rate.  X-basis bits
become key material; Z-basis bits are kept only to estimate privacy
leakage, so a link yields roughly n_events/4 key bits.

Error correction is modeled by its accounting rather than decoded: the
parties adopt the reference string and disclose
f_ec * n * h2(e_obs) bits, with a residual failure probability eps_ec.

Defaults follow the strongest measured link of the three-user testbed:
QBER_Z = 3.42%, QBER_X = 4.76%, reconciliation efficiency 1.1648.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .otuh import ROLE_X, ROLE_Y, KeyBlock, ProtocolError
from .rng import stream
from .secparams import h2

# Basis labels for the per-event draws.
BASIS_Z = 0
BASIS_X = 1


@dataclass
class LinkParams:
    """Per-link simulation inputs.

    `keep_x`/`keep_z` retain only a fraction of sifted events per basis,
    which reproduces asymmetric X/Z sample sizes.  `qber_schedule`, if
    given, maps an array of normalized times in [0, 1) to
    (qber_z, qber_x) arrays and overrides the constant rates.
    """

    qber_z: float = 0.0342
    qber_x: float = 0.0476
    pair_rate: float = 1.0
    f_ec: float = 1.1648
    eps_ec: float = 1e-10
    seed: int = 0
    keep_x: float = 1.0
    keep_z: float = 1.0
    qber_schedule: Optional[Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]]] = None

    def __post_init__(self):
        if not (0 <= self.qber_z < 0.5 and 0 <= self.qber_x < 0.5):
            raise ValueError("QBER values must lie in [0, 0.5)")
        if self.f_ec < 1:
            raise ValueError("reconciliation efficiency must be >= 1")
        if not 0 < self.eps_ec < 1:
            raise ValueError("eps_ec must lie in (0, 1)")
        if not (0 < self.keep_x <= 1 and 0 < self.keep_z <= 1):
            raise ValueError("retention fractions must lie in (0, 1]")
        if self.pair_rate <= 0:
            raise ValueError("pair rate must be positive")


@dataclass
class LinkStats:
    """Measured outputs of one simulated link."""

    n_x: int
    n_z: int
    e_x_obs: float
    e_z_obs: float
    leakage_bits: float
    f_ec: float
    eps_ec: float

    def to_dict(self) -> dict:
        return {
            "n_x": self.n_x,
            "n_z": self.n_z,
            "e_x_obs": self.e_x_obs,
            "e_z_obs": self.e_z_obs,
            "leakage_bits": self.leakage_bits,
            "f_ec": self.f_ec,
            "eps_ec": self.eps_ec,
        }


@dataclass
class SiftedKeys:
    """Matched-basis outcomes of both ends, split by basis."""

    x_a: np.ndarray
    x_b: np.ndarray
    z_a: np.ndarray
    z_b: np.ndarray


def simulate_link(
    params: LinkParams,
    n_events: int,
    rng: Optional[np.random.Generator] = None,
) -> tuple[SiftedKeys, LinkStats]:
    """Run one link for n_events pair events; deterministic given the stream.

    Draw order is fixed: bases A, bases B, outcomes A, flip uniforms,
    then the two retention masks.
    """
    if n_events < 1:
        raise ValueError("need at least one pair event")
    if rng is None:
        rng = stream(params.seed, "link")

    basis_a = rng.integers(0, 2, n_events, dtype=np.uint8)
    basis_b = rng.integers(0, 2, n_events, dtype=np.uint8)
    bits_a = rng.integers(0, 2, n_events, dtype=np.uint8)
    u = rng.random(n_events)

    if params.qber_schedule is not None:
        t = np.arange(n_events, dtype=np.float64) / n_events
        qz, qx = params.qber_schedule(t)
    else:
        qz = np.full(n_events, params.qber_z)
        qx = np.full(n_events, params.qber_x)
    qber = np.where(basis_a == BASIS_X, qx, qz)

    matched = basis_a == basis_b
    flips = (u < qber).astype(np.uint8)
    bits_b = bits_a ^ flips

    x_mask = matched & (basis_a == BASIS_X)
    z_mask = matched & (basis_a == BASIS_Z)
    if params.keep_x < 1:
        x_mask &= rng.random(n_events) < params.keep_x
    if params.keep_z < 1:
        z_mask &= rng.random(n_events) < params.keep_z

    keys = SiftedKeys(
        x_a=bits_a[x_mask].copy(),
        x_b=bits_b[x_mask].copy(),
        z_a=bits_a[z_mask].copy(),
        z_b=bits_b[z_mask].copy(),
    )
    n_x = int(keys.x_a.size)
    n_z = int(keys.z_a.size)
    e_x = float(np.mean(keys.x_a != keys.x_b)) if n_x else 0.0
    e_z = float(np.mean(keys.z_a != keys.z_b)) if n_z else 0.0
    stats = LinkStats(
        n_x=n_x,
        n_z=n_z,
        e_x_obs=e_x,
        e_z_obs=e_z,
        leakage_bits=params.f_ec * n_x * h2(e_x),
        f_ec=params.f_ec,
        eps_ec=params.eps_ec,
    )
    return keys, stats


def reconcile(
    key_a: np.ndarray,
    key_b: np.ndarray,
    stats: LinkStats,
    rng: np.random.Generator,
) -> tuple[np.ndarray, float, bool]:
    """Oracle reconciliation: both parties adopt key_a.

    Returns (agreed key, disclosed bits = f_ec * n * h2(e_obs), success);
    success is drawn false with probability eps_ec.
    """
    if key_a.shape != key_b.shape:
        raise ValueError("reconciliation requires equal-length keys")
    n = int(key_a.size)
    e_obs = float(np.mean(key_a != key_b)) if n else 0.0
    leakage = stats.f_ec * n * h2(e_obs)
    success = bool(rng.random() >= stats.eps_ec)
    return key_a.copy(), leakage, success


@dataclass
class ThreePartyKeys:
    """Role/round-labelled key blocks for the three parties.

    Block i of every party carries role X for even i, Y for odd i, and
    round 1 for i mod 4 in {0, 1}, round 2 otherwise, so consecutive
    groups of four cover one two-round agreement run.
    """

    blocks: dict[str, list[KeyBlock]] = field(default_factory=dict)
    _cursor: dict[tuple[str, str, int], int] = field(default_factory=dict, repr=False)

    def next_block(self, owner: str, role: str, rnd: int) -> KeyBlock:
        pool = self.blocks.get(owner, ())
        start = self._cursor.get((owner, role, rnd), 0)
        for i in range(start, len(pool)):
            blk = pool[i]
            if not blk.consumed and blk.role == role and blk.round == rnd:
                self._cursor[(owner, role, rnd)] = i
                return blk
        raise ProtocolError(f"key material exhausted for {owner}/{role}/round{rnd}")

    def remaining(self, owner: str) -> int:
        return sum(1 for b in self.blocks.get(owner, ()) if not b.consumed)


def build_three_party_keys(
    link_ab: np.ndarray,
    link_ac: np.ndarray,
    l: int,
    perm_seed: int,
) -> ThreePartyKeys:
    """Derive XOR-correlated l-bit blocks from two reconciled link keys.

    K_B and K_C are truncated to their common length, K_A = K_B xor K_C,
    and one shared pseudorandom permutation (announced publicly as
    perm_seed) reorders all three strings identically before they are cut
    into l-bit blocks, so per-block X_A = X_B xor X_C holds exactly.
    """
    if l % 8 != 0 or l <= 0:
        raise ValueError("block length must be a positive multiple of 8")
    m = min(int(link_ab.size), int(link_ac.size))
    n_blocks = m // l
    if n_blocks == 0:
        raise ProtocolError(
            f"insufficient key material: {m} common bits, need at least {l}"
        )
    k_b = link_ab[:m].astype(np.uint8)
    k_c = link_ac[:m].astype(np.uint8)
    k_a = k_b ^ k_c

    order = stream(perm_seed, "block-permutation").permutation(m)
    k_a, k_b, k_c = k_a[order], k_b[order], k_c[order]

    out = ThreePartyKeys(blocks={"Alice": [], "Bob": [], "Charlie": []})
    for i in range(n_blocks):
        role = ROLE_X if i % 2 == 0 else ROLE_Y
        rnd = 1 if i % 4 < 2 else 2
        seg = slice(i * l, (i + 1) * l)
        for owner, k in (("Alice", k_a), ("Bob", k_b), ("Charlie", k_c)):
            bits = np.packbits(k[seg]).tobytes()
            out.blocks[owner].append(
                KeyBlock(bits=bits, owner=owner, role=role, round=rnd)
            )
    return out
