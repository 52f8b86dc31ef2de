"""Per-user SINR and instantaneous sum spectral efficiency.

The SINR formula lives in exactly one place: it takes the total antennas x
users precoder, so the hybrid schemes (pass ``F @ W``) and the full-array
scheme (pass its matrix directly) share one code path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DomainError


@dataclass(frozen=True)
class LinkBudget:
    """Total transmit power in linear scale, split evenly across users.

    The noise variance is normalized to 1, so ``power`` equals the average
    per-antenna SNR; each of the ``users`` streams carries power/users.
    """

    power: float
    users: int

    def __post_init__(self):
        if not self.power > 0.0:
            raise DomainError("power must be positive")
        if self.users < 1:
            raise DomainError("users must be at least 1")


def sinr_per_user(h: np.ndarray, total_precoder: np.ndarray, budget: LinkBudget) -> np.ndarray:
    """Per-user SINR under equal power allocation.

    ``SINR_k = (P/K)|h_k^H t_k|^2 / (1 + sum_{j != k} (P/K)|h_k^H t_j|^2)``
    where t_j is column j of the total precoder and P/K the per-stream
    power.  Returns a length-K vector of nonnegative values.
    """
    if h.ndim != 2 or total_precoder.ndim != 2:
        raise DimensionError("channel and precoder must be 2-d matrices")
    if h.shape[0] != budget.users:
        raise DimensionError("channel rows must match the budget's user count")
    if h.shape[1] != total_precoder.shape[0] or total_precoder.shape[1] != budget.users:
        raise DimensionError("precoder must be antennas x users")
    gains2 = np.abs(h @ total_precoder) ** 2
    c = budget.power / budget.users
    desired = np.diagonal(gains2)
    interference = gains2.sum(axis=1) - desired
    return c * desired / (1.0 + c * interference)


def sum_spectral_efficiency(sinrs) -> float:
    """Instantaneous sum rate ``sum_k log2(1 + SINR_k)`` in bits/s/Hz.

    The average over the fading distribution is taken by the Monte Carlo
    harness; this is the per-realization summand.
    """
    s = np.asarray(sinrs, dtype=np.float64)
    if s.ndim != 1:
        raise DimensionError("SINRs must form a 1-d vector")
    if np.any(s < 0.0) or np.any(np.isnan(s)):
        raise DomainError("SINRs must be nonnegative")
    return float(np.log1p(s).sum() / math.log(2.0))
