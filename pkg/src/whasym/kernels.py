"""Convolution kernels k(t) = (1/2pi) int (psi(w) - 1) exp(-i w t) dw.

Two evaluation routes are used:

``fourier``
    For symbols with psi - 1 negligible outside a finite support (all
    regulated physical models, Gaussian bumps).  Composite Gauss-Legendre
    panels graded towards singular points; the same nodes serve every t,
    so a tabulation is one exponential sum.
``contour``
    For pure Fisher-Hartwig products (b == 1).  psi is analytic off the
    vertical segments [w_j - i, w_j + i]; for t > 0 the line is pushed down
    onto the lower halves of the cuts and for t < 0 up onto the upper
    halves, leaving non-oscillatory Laplace integrals over y in [0, 1].
``mixed``
    b - 1 of finite support times FH factors: contour kernel of the FH
    product plus the Fourier route applied to (b - 1) prod psi_j.
"""

import numpy as np

from . import core
from .quadrature import fourier_rule, tanh_sinh
from .symbols import SymbolError, eval_symbol, fh_factor

__all__ = ["KernelError", "KernelEvaluator", "kernel_value", "xray_g0"]


class KernelError(RuntimeError):
    """Quadrature failure while computing a kernel."""


def _t_bucket(t_max):
    return float(2.0 ** np.ceil(np.log2(max(t_max, 1.0))))


class KernelEvaluator:
    """Kernel of W_T(psi) for one symbol; evaluate with ``k(t)``."""

    def __init__(self, spec, n_gauss=20, panel_scale=1.0):
        self.spec = spec
        self.n_gauss = n_gauss
        self.panel_scale = panel_scale
        if spec.is_trivial:
            self.route = "zero"
        elif spec.pure_fh:
            self.route = "contour"
            self._build_contour()
        elif spec.psi_support is not None:
            self.route = "fourier"
            self._rules = {}
        elif spec.full is None and spec.support is not None:
            self.route = "mixed"
            self._rules = {}
            self._build_contour()
        else:
            raise KernelError(f"no kernel route for symbol '{spec.label}': "
                              "psi - 1 must have finite effective support or b must be 1")

    # fourier route -------------------------------------------------------
    def _fourier_coeffs(self, t_max):
        key = _t_bucket(t_max)
        if key not in self._rules:
            spec = self.spec
            lo, hi = spec.support
            sing = set(spec.locations) | set(spec.grading_points)
            om, w = fourier_rule(lo, hi, singular_points=sing, t_max=key / self.panel_scale,
                                 n_gauss=self.n_gauss, max_width=0.5 * spec.scale * self.panel_scale)
            if self.route == "mixed":
                fh = np.ones(om.shape, dtype=complex)
                for sg in spec.active_singularities:
                    fh = fh * fh_factor(om - sg.location, sg.alpha, sg.beta)
                vals = (spec.smooth_part(om) - 1.0) * fh
            else:
                vals = eval_symbol(spec, om) - 1.0
            if not np.all(np.isfinite(vals)):
                raise KernelError(f"non-finite symbol values on {np.sum(~np.isfinite(vals))} quadrature nodes")
            self._rules[key] = (w * vals / (2.0 * np.pi), -1j * om)
        return self._rules[key]

    # contour route -------------------------------------------------------
    def _build_contour(self):
        y, w, dy, dy1 = tanh_sinh(0.0, 1.0, step=1.0 / 32.0)
        self._down = []  # (coef, rate) for t > 0
        self._up = []    # for t < 0, applied to |t|
        sings = self.spec.active_singularities
        for j, s in enumerate(sings):
            a, b = s.alpha, s.beta
            base = np.exp((a + b) * np.log(dy))
            lower = base * np.exp(-a * np.log1p(y) - b * np.log(dy1))
            upper = base * np.exp(-b * np.log1p(y) - a * np.log(dy1))
            for l, other in enumerate(sings):
                if l == j:
                    continue
                shift = s.location - other.location
                lower = lower * fh_factor(shift - 1j * y, other.alpha, other.beta)
                upper = upper * fh_factor(shift + 1j * y, other.alpha, other.beta)
            self._down.append((-w * lower * np.sin(np.pi * b) / np.pi, -y - 1j * s.location))
            self._up.append((-w * upper * np.sin(np.pi * a) / np.pi, -y + 1j * s.location))
        self._down = (np.concatenate([c for c, _ in self._down]), np.concatenate([r for _, r in self._down]))
        self._up = (np.concatenate([c for c, _ in self._up]), np.concatenate([r for _, r in self._up]))

    def one_sided(self, sign):
        """k(0+) for sign > 0, k(0-) for sign < 0."""
        if self.route == "zero":
            return 0j
        if self.route in ("contour", "mixed"):
            coef, _ = self._down if sign > 0 else self._up
            extra = complex(self._fourier_part(np.array([0.0]))[0]) if self.route == "mixed" else 0
            return complex(np.sum(coef)) + extra
        return complex(self(np.array([0.0]))[0])

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if self.route == "zero":
            return np.zeros(t.shape, dtype=complex)
        if self.route == "fourier":
            return self._fourier_part(t)
        out = self._contour_part(t)
        if self.route == "mixed":
            out = out + self._fourier_part(t)
        return out

    def _fourier_part(self, t):
        tm = float(np.max(np.abs(t))) if t.size else 1.0
        coef, rate = self._fourier_coeffs(tm)
        return core.exp_sum(coef, rate, t)

    def _contour_part(self, t):
        out = np.empty(t.shape, dtype=complex)
        flat_t = t.ravel()
        flat = out.ravel()
        pos, neg, zero = flat_t > 0, flat_t < 0, flat_t == 0
        if np.any(pos):
            flat[pos] = core.exp_sum(*self._down, flat_t[pos])
        if np.any(neg):
            flat[neg] = core.exp_sum(*self._up, -flat_t[neg])
        if np.any(zero):
            flat[zero] = 0.5 * (np.sum(self._down[0]) + np.sum(self._up[0]))
        return flat.reshape(t.shape)

    def toeplitz_values(self, h, n):
        """k(j h) for j = -(n-1) .. n-1, as an array of length 2n - 1."""
        if self.route == "zero":
            return np.zeros(2 * n - 1, dtype=complex)
        out = np.zeros(2 * n - 1, dtype=complex)
        if self.route in ("fourier", "mixed"):
            coef, rate = self._fourier_coeffs((n - 1) * h)
            out += core.exp_sum_uniform(coef, rate, -(n - 1) * h, h, 2 * n - 1)
        if self.route in ("contour", "mixed"):
            if n > 1:
                out[n:] += core.exp_sum_uniform(*self._down, h, h, n - 1)
                out[: n - 1] += core.exp_sum_uniform(*self._up, h, h, n - 1)[::-1]
            out[n - 1] += 0.5 * (np.sum(self._down[0]) + np.sum(self._up[0]))
        return out


def kernel_value(kernel, t):
    """k(t); at t = 0 the mean of the one-sided limits."""
    return kernel(t)


def xray_g0(params, t, n_gauss=20):
    """Free local Green's function g0(t) = (1/2pi) int F(w - eF) exp(-i w t) dw.

    Independent of the coupling; the X-ray kernel equals -v g0.
    """
    from .symbols import _xray_green, _REGULATOR_CUTOFF  # noqa: PLC0415

    params.check_positive("m", "fermi_energy")
    t = np.asarray(t, dtype=float)
    ef, lam = params.fermi_energy, params.cutoff
    lo, hi = ef - _REGULATOR_CUTOFF * lam, ef + _REGULATOR_CUTOFF * lam
    tm = _t_bucket(float(np.max(np.abs(t))) if t.size else 1.0)
    om, w = fourier_rule(lo, hi, singular_points=(0.0, ef), t_max=tm, n_gauss=n_gauss, max_width=0.5 * lam)
    vals = params.regulator(om - ef) * _xray_green(params, om)
    return core.exp_sum(w * vals / (2 * np.pi), -1j * om, t)
