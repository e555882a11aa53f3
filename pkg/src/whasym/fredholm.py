"""Nystrom discretization of W_T(psi) on L^2[0, T] and its (regularized) log-determinants."""

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .kernels import KernelError

__all__ = [
    "SingularOperatorError",
    "DiscretizedOperator",
    "RefineResult",
    "RULES",
    "discretize",
    "log_det",
    "log_det2",
    "wrap_phase",
    "unwrap_to",
    "richardson",
    "refine",
]

RULES = ("trapezoid", "gauss-legendre")
_ALIASES = {"uniform-trapezoid": "trapezoid", "trapezoid": "trapezoid",
            "gauss-legendre": "gauss-legendre", "gl": "gauss-legendre"}


class SingularOperatorError(ArithmeticError):
    """The discretized operator I + K is numerically singular."""


@dataclass
class DiscretizedOperator:
    """I + K with K_ij = sqrt(w_i) k(t_i - t_j) sqrt(w_j)."""

    T: float
    N: int
    rule: str
    nodes: np.ndarray
    weights: np.ndarray
    K: np.ndarray

    @property
    def matrix(self):
        return np.eye(self.N, dtype=complex) + self.K

    def trace(self):
        return complex(np.trace(self.K))


def discretize(kernel, T, N, rule="trapezoid"):
    """Nystrom matrix for the truncated convolution with kernel ``k`` on [0, T].

    ``trapezoid`` uses N equispaced nodes (a Toeplitz matrix, so only 2N - 1
    kernel values are needed); ``gauss-legendre`` uses N Legendre nodes.
    """
    if not T > 0:
        raise ValueError("T must be positive")
    if N < 8:
        raise ValueError("N must be at least 8")
    rule = _ALIASES.get(rule)
    if rule is None:
        raise ValueError(f"unknown rule; expected one of {RULES}")
    if rule == "trapezoid":
        t = np.linspace(0.0, T, N)
        h = T / (N - 1)
        w = np.full(N, h)
        w[0] = w[-1] = 0.5 * h
        vals = kernel.toeplitz_values(h, N)
        col = vals[N - 1:]          # k(i h), i = 0..N-1
        row = vals[N - 1::-1]       # k(-j h)
        K = scipy.linalg.toeplitz(col, row)
    else:
        x, gw = np.polynomial.legendre.leggauss(N)
        t = 0.5 * T * (x + 1.0)
        w = 0.5 * T * gw
        K = kernel(t[:, None] - t[None, :])
    s = np.sqrt(w)
    K = K * s[:, None] * s[None, :]
    if not np.all(np.isfinite(K)):
        raise KernelError("non-finite kernel values in the discretized operator")
    return DiscretizedOperator(float(T), int(N), rule, t, w, K)


def wrap_phase(z):
    """Move Im z into (-pi, pi]."""
    z = complex(z)
    im = (z.imag + np.pi) % (2 * np.pi) - np.pi
    if im == -np.pi:
        im = np.pi
    return complex(z.real, im)


def unwrap_to(z, reference):
    """Shift Im z by a multiple of 2 pi to lie closest to ``reference``."""
    z = complex(z)
    k = np.round((complex(reference).imag - z.imag) / (2 * np.pi))
    return complex(z.real, z.imag + 2 * np.pi * k)


def log_det(op):
    """ln det(I + K) from a partially pivoted LU factorization, Im part in (-pi, pi]."""
    if op.K.size and not np.any(op.K):
        return 0j
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)  # reported below
        lu, piv = scipy.linalg.lu_factor(op.matrix, check_finite=False)
    diag = np.diagonal(lu)
    if np.min(np.abs(diag)) < 1e-300:
        raise SingularOperatorError("pivot below 1e-300 in LU factorization")
    swaps = int(np.count_nonzero(piv != np.arange(op.N)))
    val = np.sum(np.log(diag)) + 1j * np.pi * swaps
    return wrap_phase(val)


def log_det2(op):
    """ln det_2(I + K) = ln det(I + K) - tr K."""
    return log_det(op) - op.trace()


@dataclass
class RefineResult:
    value: complex
    error: float
    levels: tuple
    values: tuple
    order: float
    status: str


def richardson(values, ratio=2.0, default_order=2.0):
    """Extrapolate a three-level ladder assuming algebraic convergence.

    The order is estimated from the ratio of successive differences and
    clamped to [0.5, 8]; returns ``(estimate, order, status)``.
    """
    v0, v1, v2 = values
    d1, d2 = v1 - v0, v2 - v1
    scale = max(1.0, abs(v2))
    if abs(d2) <= 1e-14 * scale:
        return v2, default_order, "ok"
    status = "ok" if abs(d2) <= abs(d1) else "non-monotone"
    if abs(d1) <= 1e-14 * scale or status != "ok":
        order = default_order
    else:
        order = float(np.clip(np.log(abs(d1) / abs(d2)) / np.log(ratio), 0.5, 8.0))
    return v2 + d2 / (ratio ** order - 1.0), order, status


def refine(kernel, T, N0, rule="trapezoid", levels=3, reference=None):
    """Richardson-extrapolated ln det_2 over grids N0, 2 N0, 4 N0.

    For the trapezoid rule N counts intervals (N + 1 nodes) so the step halves
    exactly.  ``reference`` fixes the branch of the imaginary part.
    """
    if N0 < 64 and kernel.route != "zero":
        raise ValueError("N0 must be at least 64")
    rule = _ALIASES.get(rule, rule)
    ns = tuple(N0 * 2 ** k for k in range(levels))
    vals = []
    prev = reference
    for n in ns:
        op = discretize(kernel, T, n + 1 if rule == "trapezoid" else n, rule)
        v = log_det2(op)
        if prev is not None:
            v = unwrap_to(v, prev)
        vals.append(v)
        prev = v
    est, order, status = richardson(vals[-3:])
    if status != "ok":
        warnings.warn(f"non-monotone grid convergence at T={T}", RuntimeWarning, stacklevel=2)
    return RefineResult(complex(est), float(abs(vals[-1] - vals[-2])), ns, tuple(vals), order, status)
