"""Complex special functions: log-Gamma, Barnes G and principal-branch powers.

All routines accept scalars or numpy arrays and return complex results.
"""

import numpy as np
from scipy.special import zeta

__all__ = [
    "PoleError",
    "log_gamma",
    "log_barnes_g",
    "barnes_g",
    "fh_constant",
    "log_fh_constant",
    "principal_log",
    "principal_power",
]

# Lanczos coefficients, g = 7, n = 9.
_LANCZOS_G = 7.0
_LANCZOS = np.array([
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
])
_HALF_LOG_2PI = 0.5 * np.log(2.0 * np.pi)

# zeta'(-1) = 1/12 - ln A  (A = Glaisher-Kinkelin constant)
_ZETA_PRIME_M1 = -0.16542114370045092921

# Bernoulli numbers B_4 .. B_18 for the large-argument expansion of ln G.
_BERNOULLI = {
    4: -1.0 / 30.0,
    6: 1.0 / 42.0,
    8: -1.0 / 30.0,
    10: 5.0 / 66.0,
    12: -691.0 / 2730.0,
    14: 7.0 / 6.0,
    16: -3617.0 / 510.0,
    18: 43867.0 / 798.0,
}

_BARNES_SHIFT = 10.0
_EULER_GAMMA = 0.57721566490153286061
# ln G(1 + w) = w (ln(2 pi) - 1)/2 - (1 + gamma) w^2/2 + sum_k (-1)^(k-1) zeta(k-1) w^k / k
_SERIES_RADIUS = 0.5
_SERIES_K = np.arange(3, 60)
_SERIES_COEF = (-1.0) ** (_SERIES_K - 1) * zeta(_SERIES_K - 1.0) / _SERIES_K


class PoleError(ValueError):
    """Raised when a function is requested at a pole (or a zero, for logarithms)."""


def _is_nonpositive_integer(z):
    z = np.asarray(z)
    return (z.imag == 0) & (z.real <= 0) & (np.round(z.real) == z.real)


def _check_finite(z, name):
    if not np.all(np.isfinite(z)):
        raise ValueError(f"{name}: non-finite argument")


def principal_log(z):
    """ln|z| + i arg z with arg in (-pi, pi]; a negative real with -0.0 imaginary part maps to +pi."""
    z = np.asarray(z, dtype=complex)
    out = np.log(z)
    neg_real = (z.imag == 0) & (z.real < 0)
    if np.any(neg_real):
        out = np.where(neg_real, np.log(-z.real) + 1j * np.pi, out)
    return out[()] if out.ndim == 0 else out


def principal_power(base, exponent):
    """base**exponent on the principal branch, arg(base) in (-pi, pi]."""
    base = np.asarray(base, dtype=complex)
    if np.any(base == 0):
        raise ValueError("principal_power: zero base")
    return np.exp(np.asarray(exponent) * principal_log(base))


def _lanczos_log_gamma(z):
    # valid for Re z >= 0.5
    zm1 = z - 1.0
    acc = np.full_like(zm1, _LANCZOS[0])
    for k in range(1, len(_LANCZOS)):
        acc = acc + _LANCZOS[k] / (zm1 + k)
    t = zm1 + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (zm1 + 0.5) * np.log(t) - t + np.log(acc)


def log_gamma(z):
    """Principal branch of ln Gamma(z).

    Uses the Lanczos approximation for Re z >= 0.5 and the recurrence
    ln Gamma(z) = ln Gamma(z + n) - sum ln(z + k) below that, which preserves
    the principal branch (analytic off the negative real axis).
    """
    z = np.asarray(z, dtype=complex)
    _check_finite(z, "log_gamma")
    if np.any(_is_nonpositive_integer(z)):
        raise PoleError("log_gamma: pole at non-positive integer")
    shift = np.maximum(np.ceil(0.5 - z.real), 0).astype(int)
    nmax = int(shift.max()) if shift.size else 0
    w = z + shift
    out = _lanczos_log_gamma(w)
    for k in range(nmax):
        active = shift > k
        out = out - np.where(active, principal_log(np.where(active, z + k, 1.0)), 0.0)
    return out[()] if out.ndim == 0 else out


def _log_barnes_large(z):
    # ln G(z) for Re z >= 10 via ln G(1 + w), w = z - 1
    w = z - 1.0
    lw = np.log(w)
    out = 0.5 * w * w * (lw - 1.5) + 0.5 * w * np.log(2.0 * np.pi) - lw / 12.0 + _ZETA_PRIME_M1
    winv2 = 1.0 / (w * w)
    wpow = winv2
    for k in range(1, 9):
        out = out + _BERNOULLI[2 * k + 2] / (4.0 * k * (k + 1)) * wpow
        wpow = wpow * winv2
    return out


def log_barnes_g(z):
    """A branch of ln G(z), G the Barnes G-function.

    The large-argument expansion is applied after shifting Re z up to at
    least 10; the downward recurrence ln G(z) = ln G(z + 1) - ln Gamma(z)
    then brings the value back.  The result is real on the positive real axis.
    """
    z = np.asarray(z, dtype=complex)
    _check_finite(z, "log_barnes_g")
    if np.any(_is_nonpositive_integer(z)):
        raise PoleError("log_barnes_g: G vanishes at non-positive integers")
    near = np.abs(z - 1.0) <= _SERIES_RADIUS
    shift = np.where(near, 0, np.maximum(np.ceil(_BARNES_SHIFT - z.real), 0)).astype(int)
    nmax = int(shift.max()) if shift.size else 0
    out = _log_barnes_large(np.where(near, 20.0, z + shift))
    for k in range(nmax - 1, -1, -1):
        active = shift > k
        arg = np.where(active, z + k, 2.0)
        out = out - np.where(active, log_gamma(arg), 0.0)
    if np.any(near):
        out = np.where(near, _log_barnes_series(np.where(near, z - 1.0, 0.0)), out)
    return out[()] if out.ndim == 0 else out


def _log_barnes_series(w):
    # Maclaurin series of ln G(1 + w), |w| <= 1/2
    acc = np.zeros_like(w)
    for c in _SERIES_COEF[::-1]:
        acc = acc * w + c
    acc = acc * w ** 3
    return w * (_HALF_LOG_2PI - 0.5) - 0.5 * (1.0 + _EULER_GAMMA) * w * w + acc


def barnes_g(z):
    """G(z), including the exact zeros at non-positive integers."""
    z = np.asarray(z, dtype=complex)
    zero = _is_nonpositive_integer(z)
    safe = np.where(zero, 1.0, z)
    out = np.where(zero, 0.0, np.exp(log_barnes_g(safe)))
    return out[()] if out.ndim == 0 else out


def log_fh_constant(alpha, beta):
    """ln E(alpha, beta) = ln G(1+alpha) + ln G(1+beta) - ln G(1+alpha+beta)."""
    alpha = np.asarray(alpha, dtype=complex)
    beta = np.asarray(beta, dtype=complex)
    out = log_barnes_g(1.0 + alpha) + log_barnes_g(1.0 + beta) - log_barnes_g(1.0 + alpha + beta)
    # E(0, b) = E(a, 0) = 1 exactly
    return np.where((alpha == 0) | (beta == 0), 0j, out)[()]


def fh_constant(alpha, beta):
    """E(alpha, beta) = G(1+alpha) G(1+beta) / G(1+alpha+beta)."""
    return np.exp(log_fh_constant(alpha, beta))
