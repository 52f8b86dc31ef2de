"""Closed-form large-array rate expressions.

Two results are implemented: an upper bound on the hybrid phase-aligned
scheme's sum rate that becomes tight as the array grows, and the exact
large-array limit of the full zero-forcing sum rate expressed through
exponential integrals.  Both are cheap enough to attach to every point of a
simulated SNR sweep.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .numerics import exponential_integral_scaled_sum

_LOG2E = math.log2(math.e)


@dataclass(frozen=True)
class SystemScale:
    """Array size, user count, and total transmit power (linear scale)."""

    antennas: int
    users: int
    power: float

    def __post_init__(self):
        if self.users < 1:
            raise DomainError("users must be at least 1")
        if self.antennas < self.users:
            raise DomainError("users must not exceed antennas")
        if not self.power > 0.0:
            raise DomainError("power must be positive")


def pzf_rate_bound(scale: SystemScale) -> float:
    """Large-array upper bound on the phase-aligned hybrid sum rate.

    ``K * log2(1 + (pi/4) * P * Nt / K)`` bits/s/Hz.  The pi/4 factor is the
    squared mean of the Rayleigh-distributed per-antenna amplitude that
    phase alignment harvests; the bound ignores the residual inter-user
    coupling, whose relative size vanishes as the array grows, so it is
    tight for large antenna counts.
    """
    c = 0.25 * math.pi * scale.power * scale.antennas / scale.users
    return scale.users * math.log1p(c) / math.log(2.0)


def fczf_asymptotic_rate(scale: SystemScale) -> float:
    """Large-array sum rate of full zero-forcing.

    ``K * log2(e) * e**(K/P) * sum_{n=1..Nt} E_n(K/P)`` bits/s/Hz, evaluated
    entirely in scaled form (the exponential factor is absorbed into each
    term) so low SNR cannot overflow.  Equals ``K * E[log2(1 + (P/K) X)]``
    with X the squared norm of an Nt-dimensional CN(0, I) vector.
    """
    x = scale.users / scale.power
    return scale.users * _LOG2E * exponential_integral_scaled_sum(scale.antennas, x)
