"""Backend selection for the hot exponential-sum kernel.

The compiled extension is used when it imports; otherwise the numpy version.
Set ``WHASYM_BACKEND=python`` to force the fallback.  ``WHASYM_THREADS``
caps the OpenMP thread count of the compiled kernel (0 = all cores).
"""

import os

import numpy as np

from . import _purecore

BACKEND = "python"
_compiled = None
if os.environ.get("WHASYM_BACKEND", "").lower() != "python":
    try:
        from . import _fastcore as _compiled  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:  # pragma: no cover - depends on build
        _compiled = None


def thread_count():
    raw = os.environ.get("WHASYM_THREADS", "0").strip() or "0"
    n = int(raw)
    if n <= 0:
        n = os.cpu_count() or 1
    return n


def exp_sum(coef, rate, t, backend=None):
    """Evaluate sum_m coef[m] * exp(rate[m] * t[j]) for every t[j]."""
    coef = np.ascontiguousarray(coef, dtype=complex).ravel()
    rate = np.ascontiguousarray(rate, dtype=complex).ravel()
    t_arr = np.asarray(t, dtype=float)
    flat = np.ascontiguousarray(t_arr.ravel())
    use = backend or BACKEND
    if use == "compiled" and _compiled is not None:
        out = _compiled.exp_sum(coef, rate, flat, thread_count())
    else:
        out = _purecore.exp_sum(coef, rate, flat)
    return np.asarray(out).reshape(t_arr.shape)


def exp_sum_uniform(coef, rate, t0, h, n, backend=None):
    """exp_sum on the uniform grid t_j = t0 + j h, j = 0 .. n-1."""
    coef = np.ascontiguousarray(coef, dtype=complex).ravel()
    rate = np.ascontiguousarray(rate, dtype=complex).ravel()
    n = int(n)
    if n <= 0:
        return np.zeros(0, dtype=complex)
    use = backend or BACKEND
    if use == "compiled" and _compiled is not None:
        return np.asarray(_compiled.exp_sum_uniform(coef, rate, float(t0), float(h), n, thread_count()))
    return _purecore.exp_sum_uniform(coef, rate, float(t0), float(h), n)
