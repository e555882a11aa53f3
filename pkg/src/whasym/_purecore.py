"""Pure-numpy implementation of the exponential-sum kernel (fallback backend)."""

import numpy as np

_CHUNK_ELEMS = 1 << 21


def exp_sum(coef, rate, t, num_threads=1):
    """out[j] = sum_m coef[m] * exp(rate[m] * t[j])."""
    coef = np.ascontiguousarray(coef, dtype=complex)
    rate = np.ascontiguousarray(rate, dtype=complex)
    t = np.ascontiguousarray(t, dtype=float)
    out = np.empty(t.shape[0], dtype=complex)
    step = max(1, _CHUNK_ELEMS // max(1, rate.shape[0]))
    for lo in range(0, t.shape[0], step):
        hi = lo + step
        out[lo:hi] = np.exp(np.outer(t[lo:hi], rate)) @ coef
    return out


def exp_sum_uniform(coef, rate, t0, h, n, num_threads=1):
    """exp_sum on the grid t_j = t0 + j h."""
    return exp_sum(coef, rate, t0 + h * np.arange(n))
