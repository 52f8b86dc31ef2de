"""Pure numpy/python fallback for the hot kernels.

Mirrors ``pzfsim._kernels._core`` function for function; the two files must
stay in lockstep algorithmically so that both backends agree to rounding
error.  The compiled twin is preferred at import time when available.
"""

import math

import numpy as np

_LN2 = math.log(2.0)
_TWO_PI = 2.0 * math.pi
_EULER = 0.5772156649015328606


def phase_precoder(h):
    """Unit-modulus precoder aligned with the conjugate-transposed channel.

    ``h`` has one row per user (row k is the conjugated channel of user k);
    column j of the result carries the element-wise phases of user j's
    channel, every entry with magnitude ``1/sqrt(antennas)``.
    """
    inv = 1.0 / math.sqrt(h.shape[1])
    phases = np.angle(np.conj(h).T)
    return np.ascontiguousarray((np.cos(phases) + 1j * np.sin(phases)) * inv)


def quantize_unit_phases(f, bits, circular=True):
    """Snap each entry's phase to the uniform grid 2*pi*n/2**bits.

    Phases are taken in [0, 2*pi); each moves to the nearest grid point with
    ties resolved toward the smaller index.  ``circular=True`` measures
    distance around the circle (phases just below 2*pi snap to 0);
    ``circular=False`` uses the plain absolute difference, which never
    selects the wrap-around neighbor.  Magnitudes are reset to
    ``1/sqrt(f.shape[0])``, their invariant value for an RF precoder, which
    makes the operation exactly idempotent.
    """
    levels = 1 << bits
    step = _TWO_PI / levels
    ph = np.angle(f)
    ph = np.where(ph < 0.0, ph + _TWO_PI, ph)
    idx = np.ceil(ph / step - 0.5)
    if circular:
        idx = np.mod(idx, levels)
    else:
        idx = np.minimum(idx, levels - 1)
    snapped = idx * step
    inv = 1.0 / math.sqrt(f.shape[0])
    return (np.cos(snapped) + 1j * np.sin(snapped)) * inv


def _e1_scaled_series(x):
    # e**x * E_1(x) for 0 < x <= 1 via the alternating power series of E_1.
    s = -_EULER - math.log(x)
    term = 1.0
    for k in range(1, 48):
        term *= x / k
        add = term / k
        if k & 1:
            s += add
        else:
            s -= add
        if add < 1e-18 * s:
            break
    return math.exp(x) * s


def _cf(n, x):
    # Scaled E_n via the modified Lentz continued fraction; reliable for
    # x > 1 (used here only when additionally n <= ceil(x)).
    b = x + n
    c = 1e300
    d = 1.0 / b
    h = d
    for i in range(1, 100000):
        a = -i * (n - 1.0 + i)
        b += 2.0
        den = a * d + b
        if abs(den) < 1e-300:
            den = 1e-300
        d = 1.0 / den
        c = b + a / c
        if abs(c) < 1e-300:
            c = 1e-300
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < 1e-15:
            return h
    raise ArithmeticError(f"continued fraction failed to converge (n={n}, x={x})")


def expint_scaled(n, x):
    """Scaled exponential integral e**x * E_n(x) for integer n >= 0, x > 0.

    E_n(x) = integral_1^inf exp(-x t) / t**n dt.  Evaluating in scaled form
    keeps the result representable even when e**x alone would overflow.
    The forward recurrence v -> (1 - x*v)/m multiplies errors by x/m, so it
    is applied only once m >= x; below that each order is computed directly
    by continued fraction (series at x <= 1).
    """
    if n == 0:
        return 1.0 / x
    if x <= 1.0:
        val = _e1_scaled_series(x)
        for m in range(1, n):
            val = (1.0 - x * val) / m
        return val
    if n <= x:
        return _cf(n, x)
    start = math.ceil(x)
    val = _cf(start, x)
    for m in range(start, n):
        val = (1.0 - x * val) / m
    return val


def expint_scaled_sum(n_max, x):
    """Sum of expint_scaled(n, x) over n = 1 .. n_max."""
    if n_max < 1:
        return 0.0
    if x <= 1.0:
        val = _e1_scaled_series(x)
        total = val
        for m in range(1, n_max):
            val = (1.0 - x * val) / m
            total += val
        return total
    ncf = min(n_max, math.ceil(x))
    total = 0.0
    val = 0.0
    for n in range(1, ncf + 1):
        val = _cf(n, x)
        total += val
    for m in range(ncf, n_max):
        val = (1.0 - x * val) / m
        total += val
    return total


def sum_se_over_powers(gains, powers):
    """Instantaneous sum spectral efficiency at each total transmit power.

    ``gains`` is the users-by-users matrix of channel/precoder inner products
    (channel @ total precoder); per-user power is total/users and the noise
    variance is 1.  Returns one value per entry of ``powers`` in bits/s/Hz.
    """
    users = gains.shape[0]
    mag2 = np.abs(gains) ** 2
    diag = np.diagonal(mag2)
    interf = mag2.sum(axis=1) - diag
    c = np.asarray(powers, dtype=np.float64)[:, None] / users
    sinr = c * diag / (1.0 + c * interf)
    return np.log1p(sinr).sum(axis=1) / _LN2
