"""Finite-key security bounds for one-time universal-hash signatures.

The chain, for one link with X-basis sample n_X (key) and Z-basis
sample n_Z (test):

    e_p  = e_Z + gamma(n_X, n_Z, e_Z, eps)          phase error of the pool
    e1_l = e_p + gamma(l, n_X - l, e_p, eps)        phase error of one l-bit block
    H_l  = l * (1 - h2(e1_l) - f * h2(e_X))         attacker-unknown bits per block

with the random-sampling-without-replacement fluctuation

    gamma(n, k, lam, eps) =
        [(1 - 2 lam) AG/(n+k) + sqrt(A^2 G^2/(n+k)^2 + 4 lam (1-lam) G)]
        / [2 + 2 A^2 G/(n+k)^2],
    A = max(n, k),
    G = (n+k)/(nk) * ln( (n+k) / (2 pi n k lam (1-lam) eps^2) ).

The log inside G is natural; everything else is base 2.  The attack
bounds are Pr = 2^(-H_l) per block,

    eps_for = |M| * 2^(-2 - H_l)     (forging lieutenant)
    eps_rep = 0                      (symmetric verifiers: no repudiation)
    eps_rob = 2 * eps_ec             (either reconciliation may fail)
    eps_total = max(eps_rep, eps_for, eps_rob).

Probability arithmetic is carried in log2 so eps values near 1e-16 and
far below stay exact; intermediate error rates above 1/2 are clamped
and flagged rather than rejected, keeping parameter sweeps total.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

__all__ = [
    "SecurityInputs",
    "SecurityReport",
    "Clamped",
    "h2",
    "gamma",
    "phase_error",
    "phase_error_block",
    "min_entropy",
    "security_bounds",
]

# Linear probabilities below 2^MIN_LOG2 flush to zero; log2 fields keep the value.
_MIN_LOG2 = -1060.0


def h2(x: float) -> float:
    """Binary entropy -x log2 x - (1-x) log2 (1-x), 0 at both endpoints."""
    if not 0 <= x <= 1:
        raise ValueError(f"binary entropy needs x in [0, 1], got {x}")
    if x == 0 or x == 1:
        return 0.0
    return -x * math.log2(x) - (1 - x) * math.log2(1 - x)


def gamma(n: float, k: float, lam: float, eps: float) -> float:
    """Finite-sample fluctuation for sampling without replacement."""
    if n < 1 or k < 1:
        raise ValueError("sample sizes must be >= 1")
    if not 0 < lam < 1:
        raise ValueError("rate must lie strictly inside (0, 1)")
    if not 0 < eps < 1:
        raise ValueError("failure parameter must lie in (0, 1)")
    a = max(n, k)
    g = (n + k) / (n * k) * math.log(
        (n + k) / (2 * math.pi * n * k * lam * (1 - lam) * eps * eps)
    )
    if g <= 0:
        raise ValueError("fluctuation term undefined: log argument at or below 1")
    ag = a * g / (n + k)
    num = (1 - 2 * lam) * ag + math.sqrt(ag * ag + 4 * lam * (1 - lam) * g)
    den = 2 + 2 * a * ag / (n + k)
    return num / den


class Clamped(NamedTuple):
    """A rate together with whether it was capped at 1/2."""

    value: float
    clamped: bool


@dataclass(frozen=True)
class SecurityInputs:
    """Parameters of one link feeding the bound chain.

    m_len is the signed message length in bits; eps_gamma is the failure
    parameter used inside both gamma terms (a free input, reported next
    to every bound).
    """

    l: int
    m_len: int
    n_x: int
    n_z: int
    e_z: float
    e_x: float
    f_ec: float
    eps_gamma: float = 1e-10
    eps_ec: float = 1e-10

    def __post_init__(self):
        if self.l <= 0 or self.m_len <= 0:
            raise ValueError("l and m_len must be positive")
        if self.n_x <= 0 or self.n_z <= 0:
            raise ValueError("sample counts must be positive")
        if not (0 <= self.e_z < 1 and 0 <= self.e_x < 1):
            raise ValueError("error rates must lie in [0, 1)")
        if self.f_ec < 1:
            raise ValueError("reconciliation efficiency must be >= 1")
        if not 0 < self.eps_gamma < 1:
            raise ValueError("eps_gamma must lie in (0, 1)")
        if not 0 < self.eps_ec < 1:
            raise ValueError("eps_ec must lie in (0, 1)")


@dataclass
class SecurityReport:
    """Bound chain outputs; linear eps values flush to 0 below 2^-1060."""

    e_p: float
    e1_l: float
    h_l: float
    pr_guess: float
    eps_for: float
    eps_rep: float
    eps_rob: float
    eps_total: float
    log2_pr_guess: float
    log2_eps_for: float
    clamped: bool
    insecure: bool
    eps_gamma: float

    def to_dict(self) -> dict:
        return {
            "e_p": self.e_p,
            "e1_l": self.e1_l,
            "H_l": self.h_l,
            "pr_guess": self.pr_guess,
            "eps_for": self.eps_for,
            "eps_rep": self.eps_rep,
            "eps_rob": self.eps_rob,
            "eps_total": self.eps_total,
            "log2_pr_guess": self.log2_pr_guess,
            "log2_eps_for": self.log2_eps_for,
            "clamped": self.clamped,
            "insecure": self.insecure,
            "eps_gamma": self.eps_gamma,
        }


def _clamp_half(x: float) -> Clamped:
    return Clamped(0.5, True) if x > 0.5 else Clamped(x, False)


def phase_error(inputs: SecurityInputs) -> Clamped:
    """Pool phase error e_p = e_Z + gamma(n_X, n_Z, e_Z, eps), capped at 1/2."""
    g = gamma(inputs.n_x, inputs.n_z, inputs.e_z, inputs.eps_gamma)
    return _clamp_half(inputs.e_z + g)


def phase_error_block(e_p: float, l: int, n_x: int, eps: float) -> Clamped:
    """Block phase error e1_l = e_p + gamma(l, n_X - l, e_p, eps), capped at 1/2."""
    if n_x <= l:
        raise ValueError("block bound needs n_x > l")
    g = gamma(l, n_x - l, e_p, eps)
    return _clamp_half(e_p + g)


def min_entropy(inputs: SecurityInputs, e1_l: float) -> float:
    """H_l = l * (1 - h2(e1_l) - f * h2(e_X)); may be <= 0 (insecure)."""
    return inputs.l * (1 - h2(e1_l) - inputs.f_ec * h2(inputs.e_x))


def _from_log2(log2_value: float) -> float:
    if log2_value >= 0:
        return 1.0
    if log2_value < _MIN_LOG2:
        return 0.0
    return 2.0 ** log2_value


def security_bounds(inputs: SecurityInputs) -> SecurityReport:
    """Evaluate the full bound chain for one parameter set.

    Observed rates above 1/2 are capped at 1/2 (the entropy maximum,
    which only loosens the bound) and flagged via `clamped`.
    """
    c0 = inputs.e_x > 0.5 or inputs.e_z > 0.5
    if c0:
        inputs = SecurityInputs(
            l=inputs.l,
            m_len=inputs.m_len,
            n_x=inputs.n_x,
            n_z=inputs.n_z,
            e_z=min(inputs.e_z, 0.5),
            e_x=min(inputs.e_x, 0.5),
            f_ec=inputs.f_ec,
            eps_gamma=inputs.eps_gamma,
            eps_ec=inputs.eps_ec,
        )
    e_p, c1 = phase_error(inputs)
    e1_l, c2 = phase_error_block(e_p, inputs.l, inputs.n_x, inputs.eps_gamma)
    h_l = min_entropy(inputs, e1_l)
    insecure = h_l <= 0

    log2_pr = 0.0 if insecure else -h_l
    log2_for = 0.0 if insecure else math.log2(inputs.m_len) - 2 - h_l
    pr_guess = _from_log2(log2_pr)
    eps_for = _from_log2(log2_for)
    eps_rep = 0.0
    eps_rob = min(2 * inputs.eps_ec, 1.0)
    eps_total = max(eps_rep, eps_for, eps_rob)
    return SecurityReport(
        e_p=e_p,
        e1_l=e1_l,
        h_l=h_l,
        pr_guess=pr_guess,
        eps_for=eps_for,
        eps_rep=eps_rep,
        eps_rob=eps_rob,
        eps_total=eps_total,
        log2_pr_guess=log2_pr,
        log2_eps_for=log2_for,
        clamped=c0 or c1 or c2,
        insecure=insecure,
        eps_gamma=inputs.eps_gamma,
    )
