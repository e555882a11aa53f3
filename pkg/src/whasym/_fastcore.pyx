# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled exponential-sum kernel.

out[j] = sum_m coef[m] * exp(rate[m] * t[j])

This single primitive covers kernel tabulation (rate = -i*omega) and the
contour representation of Fisher-Hartwig kernels (rate = -y - i*omega0).
"""

from cython.parallel cimport prange
from libc.math cimport exp, cos, sin
import numpy as np
cimport numpy as cnp

cnp.import_array()


def exp_sum(const double complex[::1] coef, const double complex[::1] rate,
            const double[::1] t, int num_threads=1):
    cdef Py_ssize_t n = t.shape[0], m = coef.shape[0], j, k
    cdef double tj, mag, ph, sr, si
    cdef double complex c, r
    out = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] out_v = out
    if num_threads < 1:
        num_threads = 1
    for j in prange(n, nogil=True, num_threads=num_threads, schedule="static"):
        tj = t[j]
        sr = 0.0
        si = 0.0
        for k in range(m):
            r = rate[k]
            c = coef[k]
            mag = exp(r.real * tj)
            ph = r.imag * tj
            sr = sr + mag * (c.real * cos(ph) - c.imag * sin(ph))
            si = si + mag * (c.real * sin(ph) + c.imag * cos(ph))
        out_v[j] = sr + 1j * si
    return out


def exp_sum_uniform(const double complex[::1] coef, const double complex[::1] rate,
                    double t0, double h, Py_ssize_t n, int num_threads=1, Py_ssize_t block=64):
    """exp_sum on the grid t_j = t0 + j h, advancing exp(rate t) by multiplication.

    Each block of ``block`` points is reseeded with one exact exponential per
    node, so the recurrence error stays at a few ulps times ``block``.
    """
    cdef Py_ssize_t m = coef.shape[0], nb, b, j, k, j0, j1
    cdef double complex z, c, acc_step
    cdef double ts
    out = np.zeros(n, dtype=np.complex128)
    cdef double complex[::1] out_v = out
    steps = np.empty(m, dtype=np.complex128)
    cdef double complex[::1] st = steps
    for k in range(m):
        st[k] = cexp_(rate[k] * h)
    if num_threads < 1:
        num_threads = 1
    nb = (n + block - 1) // block
    for b in prange(nb, nogil=True, num_threads=num_threads, schedule="static"):
        j0 = b * block
        j1 = j0 + block
        if j1 > n:
            j1 = n
        ts = t0 + j0 * h
        for k in range(m):
            z = coef[k] * cexp_(rate[k] * ts)
            acc_step = st[k]
            for j in range(j0, j1):
                out_v[j] = out_v[j] + z
                z = z * acc_step
    return out


cdef inline double complex cexp_(double complex w) noexcept nogil:
    cdef double mag = exp(w.real)
    return mag * cos(w.imag) + 1j * mag * sin(w.imag)
