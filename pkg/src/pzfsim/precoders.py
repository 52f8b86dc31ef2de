"""Precoder constructions.

Four schemes share the conventions of this module: the hybrid scheme splits
into an RF stage F (antennas x users, unit-modulus entries) and a baseband
stage W (users x users) normalized so that ``||F W||_F**2 = users``; the
full-array reference scheme produces a single antennas x users matrix with
unit-norm columns.  ``channel @ total_precoder`` is then diagonal for every
zero-forcing construction here.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels
from .errors import DimensionError, DomainError
from .numerics import gram_inverse


@dataclass(frozen=True)
class QuantizationSpec:
    """Phase-shifter resolution: phases restricted to ``2**bits`` levels.

    ``circular=True`` (default) measures the phase distance around the
    circle, so values just below 2*pi quantize to 0.  ``circular=False``
    uses the plain absolute difference over [0, 2*pi), which never selects
    the wrap-around neighbor; it is kept as a switch because the circular
    rule is the physically sensible one but not the only defensible reading.
    """

    bits: int
    circular: bool = True

    def __post_init__(self):
        if not 1 <= self.bits <= 16:
            raise DomainError("bits must be between 1 and 16")


def pzf_rf(h: np.ndarray) -> np.ndarray:
    """RF stage of the hybrid scheme: copy the channel phases.

    Column j carries the element-wise phases of user j's channel (the j-th
    column of the conjugate-transposed composite channel), so the array gain
    of user j adds coherently: ``h[j] @ f[:, j]`` equals the mean absolute
    channel amplitude times ``sqrt(antennas)``.  Entries all have magnitude
    ``1/sqrt(antennas)``; a zero channel entry gets phase 0.
    """
    h = np.ascontiguousarray(h, dtype=np.complex128)
    if h.ndim != 2:
        raise DimensionError("channel must be a 2-d matrix")
    return _kernels.phase_precoder(h)


def quantize_rf(f: np.ndarray, spec: QuantizationSpec) -> np.ndarray:
    """Snap every RF phase to the spec's uniform grid.

    Magnitudes stay at ``1/sqrt(antennas)`` and the operation is exactly
    idempotent: re-quantizing the result returns it unchanged.
    """
    f = np.ascontiguousarray(f, dtype=np.complex128)
    if f.ndim != 2:
        raise DimensionError("precoder must be a 2-d matrix")
    return _kernels.quantize_unit_phases(f, spec.bits, spec.circular)


def effective_channel(h: np.ndarray, f: np.ndarray) -> np.ndarray:
    """Low-dimensional channel seen by the baseband stage: ``h @ f``."""
    if h.shape[1] != f.shape[0]:
        raise DimensionError(
            f"channel has {h.shape[1]} antennas but precoder has {f.shape[0]} rows"
        )
    return h @ f


def baseband_zf(h_eq: np.ndarray, f: np.ndarray) -> np.ndarray:
    """Zero-forcing baseband precoder on the effective channel.

    ``W = H_eq^H (H_eq H_eq^H)^-1 Lambda`` with the diagonal Lambda chosen
    so every column of ``F @ W`` has unit norm; consequently
    ``||F W||_F**2`` equals the user count and ``H_eq @ W`` is diagonal with
    positive real entries (no inter-user interference at baseband).
    Propagates SingularMatrixError when the effective channel is rank
    deficient.
    """
    gram = h_eq @ np.conj(h_eq).T
    w0 = np.conj(h_eq).T @ gram_inverse(gram)
    col_norms = np.linalg.norm(f @ w0, axis=0)
    return w0 / col_norms


def full_zf(h: np.ndarray) -> np.ndarray:
    """Full-array zero-forcing precoder (one RF chain per antenna).

    Column k is the unit-norm projection of user k's channel onto the
    nullspace of the other users' channels, computed as the k-th column of
    ``H^H (H H^H)^-1`` rescaled to unit norm; ``h @ result`` is diagonal
    with positive real entries.
    """
    gram = h @ np.conj(h).T
    t = np.conj(h).T @ gram_inverse(gram)
    return t / np.linalg.norm(t, axis=0)


@lru_cache(maxsize=8)
def _dft_columns(antennas: int) -> np.ndarray:
    m = np.arange(antennas)
    d = np.exp(2j * np.pi * np.outer(m, m) / antennas) / np.sqrt(antennas)
    d.setflags(write=False)
    return d


def bmimo_precoder(h: np.ndarray, spacing: float = 0.5):
    """Fixed-beam baseline: DFT columns at RF, zero-forcing at baseband.

    The RF precoder takes the ``users`` distinct columns of the unitary DFT
    matrix with the largest total projected channel power (summed over
    users); ties resolve toward the lower beam index, so the selection is
    deterministic.  The baseband stage is ``baseband_zf`` on the resulting
    effective channel, and a SingularMatrixError propagates when the chosen
    beams leave it rank deficient.

    The DFT beam set itself does not depend on the antenna spacing; the
    argument is accepted for interface symmetry with the channel model.

    Returns the pair ``(rf, baseband)``.
    """
    users, antennas = h.shape
    if users > antennas:
        raise DimensionError("users must not exceed antennas")
    dft = _dft_columns(antennas)
    scores = (np.abs(h @ dft) ** 2).sum(axis=0)
    order = np.argsort(-scores, kind="stable")
    chosen = np.sort(order[:users])
    f = np.ascontiguousarray(dft[:, chosen])
    w = baseband_zf(effective_channel(h, f), f)
    return f, w
