"""Wavelength-channel budgets and agreement communication complexity.

Splitting n users into k subnets (k | n) costs, by the headline count,

    total = (n/k)(n/k - 1) + k(k - 1)

wavelength channels: one fully connected (n/k)-user subnet plus k(k-1)
inter-subnet channels.  That count books the intra-subnet term once;
reading it per subnet instead gives k * (n/k)(n/k - 1) + k(k - 1).
Both are reported, the headline count is what gets optimized, and its
minimizer is sqrt(n) whenever n, k, sqrt(n) are all integers.

Running the recursive agreement with N parties and f traitors costs

    C = sum_{m=0}^{f-1} A(N-1, 2+m),  A(a, b) = a!/(a-b)!

signature rounds, with N >= 2f + 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

__all__ = ["NetworkPlan", "SubnetChoice", "channels_required", "optimal_subnets", "comm_complexity"]


@dataclass(frozen=True)
class NetworkPlan:
    """Channel budget for n users split into k subnets.

    channels_total books the intra-subnet channels once (headline
    count); the *_per_subnet_reading fields book them for each of the
    k subnets.
    """

    n_users: int
    k_subnets: int
    channels_intra: int
    channels_inter: int
    channels_total: int
    channels_intra_per_subnet_reading: int
    channels_total_per_subnet_reading: int

    def to_dict(self) -> dict:
        return {
            "n_users": self.n_users,
            "k_subnets": self.k_subnets,
            "channels_intra": self.channels_intra,
            "channels_inter": self.channels_inter,
            "channels_total": self.channels_total,
            "channels_intra_per_subnet_reading": self.channels_intra_per_subnet_reading,
            "channels_total_per_subnet_reading": self.channels_total_per_subnet_reading,
        }


def channels_required(n: int, k: int) -> NetworkPlan:
    """Channel budget for n users in k subnets; k must divide n."""
    if n < 1 or k < 1:
        raise ValueError("need n, k >= 1")
    if n % k != 0:
        raise ValueError(f"subnet count {k} does not divide user count {n}")
    size = n // k
    intra = size * (size - 1)
    inter = k * (k - 1)
    return NetworkPlan(
        n_users=n,
        k_subnets=k,
        channels_intra=intra,
        channels_inter=inter,
        channels_total=intra + inter,
        channels_intra_per_subnet_reading=k * intra,
        channels_total_per_subnet_reading=k * intra + inter,
    )


class SubnetChoice(NamedTuple):
    """Chosen subnet count; closed_form is True when k = sqrt(n) applied."""

    k: int
    closed_form: bool


def optimal_subnets(n: int) -> SubnetChoice:
    """Subnet count minimizing the headline channel total.

    Returns sqrt(n) when it is an integer (the closed form); otherwise
    brute-forces all divisors of n and flags that the closed form does
    not apply.  Ties go to the smallest divisor.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    root = math.isqrt(n)
    if root * root == n:
        return SubnetChoice(root, True)
    divisors = [k for k in range(1, n + 1) if n % k == 0]
    best = min(divisors, key=lambda k: (channels_required(n, k).channels_total, k))
    return SubnetChoice(best, False)


def comm_complexity(n_parties: int, f_faulty: int) -> int:
    """Signature rounds for the recursive agreement: sum of A(N-1, 2+m)."""
    if f_faulty < 1:
        raise ValueError("need at least one tolerated fault")
    if n_parties < 2 * f_faulty + 1:
        raise ValueError(
            f"{n_parties} parties cannot tolerate {f_faulty} faults (need N >= 2f + 1)"
        )
    return sum(math.perm(n_parties - 1, 2 + m) for m in range(f_faulty))
