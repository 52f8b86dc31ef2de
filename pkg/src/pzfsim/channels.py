"""Channel generators: i.i.d. Rayleigh fading and a sparse geometric
millimeter-wave model built on uniform-linear-array responses.

Matrices follow the downlink convention used throughout the package: the
channel has one row per user and row k is the conjugated channel of user k,
so ``h[k] @ t`` is the complex gain user k sees from precoding vector t.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DomainError
from .numerics import complex_gaussian_matrix


@dataclass(frozen=True)
class MmWaveParams:
    """Geometry of the sparse multipath model.

    ``paths`` is the number of propagation paths per user; ``spacing`` is
    the antenna spacing normalized to the carrier wavelength.
    """

    paths: int = 10
    spacing: float = 0.5

    def __post_init__(self):
        if self.paths < 1:
            raise DomainError("paths must be at least 1")
        if not self.spacing > 0.0:
            raise DomainError("spacing must be positive")


def _check_dims(users: int, antennas: int) -> None:
    if users < 1 or antennas < 1:
        raise DimensionError("users and antennas must be positive")
    if users > antennas:
        raise DimensionError("users must not exceed antennas")


def rayleigh_channel(rng: np.random.Generator, users: int, antennas: int) -> np.ndarray:
    """``users x antennas`` channel with i.i.d. CN(0, 1) entries."""
    _check_dims(users, antennas)
    return complex_gaussian_matrix(rng, users, antennas)


def ula_response(antennas: int, spacing: float, azimuth: float) -> np.ndarray:
    """Unit-norm uniform-linear-array response vector.

    Entry m is ``exp(2j*pi*spacing*m*sin(azimuth)) / sqrt(antennas)`` for
    m = 0 .. antennas-1.  The response of a linear array has no elevation
    dependence, so azimuth alone parameterizes it.
    """
    if antennas < 1:
        raise DimensionError("antennas must be positive")
    if not spacing > 0.0:
        raise DomainError("spacing must be positive")
    m = np.arange(antennas)
    return np.exp(2j * np.pi * spacing * np.sin(azimuth) * m) / np.sqrt(antennas)


def mmwave_channel(
    rng: np.random.Generator,
    users: int,
    antennas: int,
    params: MmWaveParams,
    return_paths: bool = False,
):
    """Sparse geometric channel: few paths per user on array responses.

    Row k is ``sqrt(antennas/paths)`` times the sum over paths of a CN(0, 1)
    gain on the conjugated array response at an azimuth drawn uniformly over
    [0, 2*pi); the scaling keeps the expected per-user channel energy equal
    to ``antennas``.  Gains are drawn before azimuths, users batched.

    With ``return_paths=True`` also returns the drawn ``(gains, azimuths)``
    arrays of shape ``(users, paths)`` so callers can reconstruct the
    generating response vectors.
    """
    _check_dims(users, antennas)
    gains = complex_gaussian_matrix(rng, users, params.paths)
    azimuths = rng.uniform(0.0, 2.0 * np.pi, size=(users, params.paths))
    m = np.arange(antennas)
    conj_steer = np.exp(
        -2j * np.pi * params.spacing * np.sin(azimuths)[..., None] * m
    ) / np.sqrt(antennas)
    h = np.sqrt(antennas / params.paths) * np.einsum("up,upa->ua", gains, conj_steer)
    if return_paths:
        return h, (gains, azimuths)
    return h
