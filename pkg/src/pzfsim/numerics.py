"""Complex-matrix helpers, deterministic sampling, and special functions.

Everything downstream builds on three things defined here: CN(0, 1) matrix
draws, a Cholesky-based inverse for the small Hermitian Gram systems of
zero-forcing, and the scaled exponential integral used by the closed-form
full-ZF rate.
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from .errors import DimensionError, DomainError, SingularMatrixError


def rng_from_seed(seed: int, *stream: int) -> np.random.Generator:
    """Deterministic generator: numpy PCG64 keyed by ``(seed, *stream)``.

    Identical keys produce identical sample streams across runs and
    platforms.  The sweep harness keys trial t as ``rng_from_seed(seed, t)``,
    which makes parallel execution order-independent.
    """
    return np.random.default_rng([int(seed), *(int(s) for s in stream)])


def complex_gaussian_matrix(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    """``rows x cols`` matrix of i.i.d. CN(0, 1) entries.

    Real and imaginary parts are independent Gaussians with variance 1/2
    each, so the complex variance is 1; drawn real part first.
    """
    if rows < 1 or cols < 1:
        raise DimensionError("matrix dimensions must be positive")
    re = rng.standard_normal((rows, cols))
    im = rng.standard_normal((rows, cols))
    return (re + 1j * im) / np.sqrt(2.0)


def hermitian(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.conj(a).T


def frobenius_norm(a: np.ndarray) -> float:
    """Square root of the sum of squared entry magnitudes."""
    return float(np.linalg.norm(a))


def gram_inverse(a: np.ndarray) -> np.ndarray:
    """Inverse of a Hermitian positive-definite matrix via Cholesky.

    Sized for the small K x K Gram systems of zero-forcing precoding, where
    K is the user count.  Raises SingularMatrixError when a Cholesky pivot
    falls below 1e-12 times the largest diagonal magnitude, which signals a
    rank-deficient effective channel (e.g. duplicated users).
    """
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError("gram_inverse expects a square matrix")
    k = a.shape[0]
    scale = float(np.max(np.abs(np.diagonal(a))))
    if not np.allclose(a, np.conj(a).T, rtol=0.0, atol=1e-10 * max(scale, 1.0)):
        raise DomainError("matrix is not Hermitian within tolerance")

    low = np.zeros((k, k), dtype=np.complex128)
    tol = 1e-12 * scale
    for j in range(k):
        pivot = a[j, j].real - np.real(np.vdot(low[j, :j], low[j, :j]))
        if pivot <= tol:
            raise SingularMatrixError(
                f"pivot {pivot:.3e} below threshold {tol:.3e} at column {j}"
            )
        d = np.sqrt(pivot)
        low[j, j] = d
        if j + 1 < k:
            low[j + 1:, j] = (a[j + 1:, j] - low[j + 1:, :j] @ np.conj(low[j, :j])) / d

    # forward solve L y = I, then back solve L^H x = y
    y = np.zeros((k, k), dtype=np.complex128)
    ident = np.eye(k, dtype=np.complex128)
    for i in range(k):
        y[i] = (ident[i] - low[i, :i] @ y[:i]) / low[i, i]
    upper = np.conj(low).T
    inv = np.zeros((k, k), dtype=np.complex128)
    for i in range(k - 1, -1, -1):
        inv[i] = (y[i] - upper[i, i + 1:] @ inv[i + 1:]) / upper[i, i]
    return inv


def exponential_integral_scaled(n: int, x: float) -> float:
    """Scaled exponential integral ``e**x * E_n(x)``.

    ``E_n(x) = integral_1^inf exp(-x t) / t**n dt``.  The scaled form keeps
    products such as ``e**(k/p) * E_n(k/p)`` representable at low SNR, where
    the unscaled factors overflow/underflow in float64.  Relative accuracy
    is 1e-10 or better for x in [1e-3, 1e3] and n up to 2048.
    """
    if n < 0:
        raise DomainError("order n must be nonnegative")
    if not x > 0.0:
        raise DomainError("argument x must be positive")
    return float(_kernels.expint_scaled(int(n), float(x)))


def exponential_integral_scaled_sum(n_max: int, x: float) -> float:
    """Sum of ``exponential_integral_scaled(n, x)`` over n = 1 .. n_max."""
    if n_max < 0:
        raise DomainError("n_max must be nonnegative")
    if not x > 0.0:
        raise DomainError("argument x must be positive")
    return float(_kernels.expint_scaled_sum(int(n_max), float(x)))
