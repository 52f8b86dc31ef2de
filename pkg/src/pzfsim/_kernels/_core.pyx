# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels.

Twin of ``pzfsim._kernels._pure``: same functions, same algorithms, C loops
instead of vectorized numpy.  Keep the two files in lockstep.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport atan2, ceil, cos, exp, fabs, fmod, log, log1p, sin, sqrt

cnp.import_array()

cdef double _LN2 = log(2.0)
cdef double _TWO_PI = 6.283185307179586476925287
cdef double _EULER = 0.5772156649015328606


def phase_precoder(double complex[:, ::1] h):
    """Unit-modulus precoder aligned with the conjugate-transposed channel.

    ``h`` has one row per user (row k is the conjugated channel of user k);
    column j of the result carries the element-wise phases of user j's
    channel, every entry with magnitude ``1/sqrt(antennas)``.
    """
    cdef Py_ssize_t users = h.shape[0]
    cdef Py_ssize_t nt = h.shape[1]
    res = np.empty((nt, users), dtype=np.complex128)
    cdef double complex[:, ::1] out = res
    cdef double inv = 1.0 / sqrt(<double> nt)
    cdef Py_ssize_t i, j
    cdef double complex z
    cdef double ph
    with nogil:
        for j in range(users):
            for i in range(nt):
                z = h[j, i]
                ph = atan2(-z.imag, z.real)
                out[i, j] = cos(ph) * inv + 1j * (sin(ph) * inv)
    return res


def quantize_unit_phases(double complex[:, ::1] f, int bits, bint circular=True):
    """Snap each entry's phase to the uniform grid 2*pi*n/2**bits.

    Phases are taken in [0, 2*pi); each moves to the nearest grid point with
    ties resolved toward the smaller index.  ``circular=True`` measures
    distance around the circle (phases just below 2*pi snap to 0);
    ``circular=False`` uses the plain absolute difference, which never
    selects the wrap-around neighbor.  Magnitudes are reset to
    ``1/sqrt(f.shape[0])``, their invariant value for an RF precoder, which
    makes the operation exactly idempotent.
    """
    cdef Py_ssize_t nt = f.shape[0]
    cdef Py_ssize_t cols = f.shape[1]
    res = np.empty((nt, cols), dtype=np.complex128)
    cdef double complex[:, ::1] out = res
    cdef double levels = <double> (1 << bits)
    cdef double step = _TWO_PI / levels
    cdef double inv = 1.0 / sqrt(<double> nt)
    cdef Py_ssize_t i, j
    cdef double complex z
    cdef double ph, idx, snapped
    with nogil:
        for i in range(nt):
            for j in range(cols):
                z = f[i, j]
                ph = atan2(z.imag, z.real)
                if ph < 0.0:
                    ph += _TWO_PI
                idx = ceil(ph / step - 0.5)
                if circular:
                    idx = fmod(idx, levels)
                elif idx > levels - 1.0:
                    idx = levels - 1.0
                snapped = idx * step
                out[i, j] = cos(snapped) * inv + 1j * (sin(snapped) * inv)
    return res


cdef double _e1_scaled_series(double x):
    # e**x * E_1(x) for 0 < x <= 1 via the alternating power series of E_1.
    cdef double s = -_EULER - log(x)
    cdef double term = 1.0
    cdef double add
    cdef int k
    for k in range(1, 48):
        term *= x / k
        add = term / k
        if k & 1:
            s += add
        else:
            s -= add
        if add < 1e-18 * s:
            break
    return exp(x) * s


cdef double _cf(double n, double x) except -1.0:
    # Scaled E_n via the modified Lentz continued fraction; reliable for
    # x > 1 (used here only when additionally n <= ceil(x)).
    cdef double b = x + n
    cdef double c = 1e300
    cdef double d = 1.0 / b
    cdef double h = d
    cdef double a, den, delta
    cdef long i
    for i in range(1, 100000):
        a = -i * (n - 1.0 + i)
        b += 2.0
        den = a * d + b
        if fabs(den) < 1e-300:
            den = 1e-300
        d = 1.0 / den
        c = b + a / c
        if fabs(c) < 1e-300:
            c = 1e-300
        delta = c * d
        h *= delta
        if fabs(delta - 1.0) < 1e-15:
            return h
    raise ArithmeticError(f"continued fraction failed to converge (n={n}, x={x})")


def expint_scaled(int n, double x):
    """Scaled exponential integral e**x * E_n(x) for integer n >= 0, x > 0.

    E_n(x) = integral_1^inf exp(-x t) / t**n dt.  Evaluating in scaled form
    keeps the result representable even when e**x alone would overflow.
    The forward recurrence v -> (1 - x*v)/m multiplies errors by x/m, so it
    is applied only once m >= x; below that each order is computed directly
    by continued fraction (series at x <= 1).
    """
    cdef double val
    cdef int m, start
    if n == 0:
        return 1.0 / x
    if x <= 1.0:
        val = _e1_scaled_series(x)
        for m in range(1, n):
            val = (1.0 - x * val) / m
        return val
    if n <= x:
        return _cf(n, x)
    start = <int> ceil(x)
    val = _cf(start, x)
    for m in range(start, n):
        val = (1.0 - x * val) / m
    return val


def expint_scaled_sum(int n_max, double x):
    """Sum of expint_scaled(n, x) over n = 1 .. n_max."""
    cdef double total = 0.0
    cdef double val = 0.0
    cdef int m, n, ncf
    if n_max < 1:
        return 0.0
    if x <= 1.0:
        val = _e1_scaled_series(x)
        total = val
        for m in range(1, n_max):
            val = (1.0 - x * val) / m
            total += val
        return total
    ncf = <int> ceil(x)
    if n_max < ncf:
        ncf = n_max
    for n in range(1, ncf + 1):
        val = _cf(n, x)
        total += val
    for m in range(ncf, n_max):
        val = (1.0 - x * val) / m
        total += val
    return total


def sum_se_over_powers(double complex[:, ::1] gains, double[::1] powers):
    """Instantaneous sum spectral efficiency at each total transmit power.

    ``gains`` is the users-by-users matrix of channel/precoder inner products
    (channel @ total precoder); per-user power is total/users and the noise
    variance is 1.  Returns one value per entry of ``powers`` in bits/s/Hz.
    """
    cdef Py_ssize_t users = gains.shape[0]
    cdef Py_ssize_t npow = powers.shape[0]
    res = np.empty(npow, dtype=np.float64)
    cdef double[::1] out = res
    diag_arr = np.empty(users, dtype=np.float64)
    interf_arr = np.empty(users, dtype=np.float64)
    cdef double[::1] diag = diag_arr
    cdef double[::1] interf = interf_arr
    cdef Py_ssize_t i, j, s
    cdef double complex z
    cdef double m2, row, c, total
    with nogil:
        for i in range(users):
            row = 0.0
            for j in range(users):
                z = gains[i, j]
                m2 = z.real * z.real + z.imag * z.imag
                row += m2
                if i == j:
                    diag[i] = m2
            interf[i] = row - diag[i]
        for s in range(npow):
            c = powers[s] / users
            total = 0.0
            for i in range(users):
                total += log1p(c * diag[i] / (1.0 + c * interf[i]))
            out[s] = total / _LN2
    return res
