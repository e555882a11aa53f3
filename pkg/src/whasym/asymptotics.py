"""Large-T asymptotics of det_2 W_T(psi) for Fisher-Hartwig symbols.

    ln det_2 W_T(psi) ~ T ln G2(psi) + (sum_j alpha_j beta_j) ln(T/2)
                        + ln E1 + ln E2 + ln E3

with E1 the product of Barnes-G constants of the singularities, E2 the
smooth-symbol constant and E3 the interaction term built from the
normalized Wiener-Hopf factors of the smooth part b.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from . import core
from .fredholm import richardson
from .quadrature import fourier_rule, integrate_line
from .specfun import log_fh_constant, principal_log
from .symbols import (
    SymbolError,
    eval_symbol,
    limit_value,
    log_smooth_remainder,
    log_symbol,
)

__all__ = [
    "AsymptoticError",
    "AsymptoticDecomposition",
    "WHFactors",
    "log_G2",
    "log_G1",
    "trace_density",
    "wiener_hopf_factorize",
    "symbol_wh_factors",
    "log_E1",
    "log_E2",
    "log_fourier_log_b",
    "fh_log_transform",
    "log_E3",
    "e3_reduced_prefactor",
    "predict",
]


class AsymptoticError(ArithmeticError):
    """A constant of the asymptotic formula could not be evaluated."""


@dataclass(frozen=True)
class AsymptoticDecomposition:
    log_g2_rate: complex
    exponent: complex
    log_e1: complex
    log_e2: complex
    log_e3: complex
    variant: str = "regularized"

    @property
    def constant(self):
        return self.log_e1 + self.log_e2 + self.log_e3

    def predict(self, T):
        """Predicted ln det_2 (or ln det for the ordinary variant) at extent T."""
        T = np.asarray(T, dtype=float)
        return T * self.log_g2_rate + self.exponent * np.log(T / 2.0) + self.constant

    def fields(self):
        return {
            "log_g2": self.log_g2_rate,
            "exponent": self.exponent,
            "log_e1": self.log_e1,
            "log_e2": self.log_e2,
            "log_e3": self.log_e3,
        }


def _line_breaks(spec):
    pts = set(spec.breakpoints())
    pts |= {-spec.scale, spec.scale}
    return sorted(pts)


def _integrate_symbol(spec, integrand, tol=1e-12):
    lo = hi = None
    if spec.psi_support is not None:
        lo, hi = spec.psi_support
    val, err = integrate_line(integrand, _line_breaks(spec), tail_scale=spec.scale, tol=tol, lo=lo, hi=hi)
    if not np.isfinite(val):
        raise AsymptoticError(f"quadrature failed for symbol '{spec.label}'")
    return complex(val), err


def log_G2(spec):
    """ln G2(psi) = (1/2pi) int (log psi - psi + 1) dw."""
    if spec.is_trivial:
        return 0j

    def f(w):
        return log_symbol(spec, w) - eval_symbol(spec, w) + 1.0

    return _integrate_symbol(spec, f)[0] / (2 * np.pi)


def _check_log_integrable(spec):
    if spec.psi_support is not None:
        return
    for s in spec.active_singularities:
        if abs(s.alpha - s.beta) > 1e-14:
            raise AsymptoticError("log psi is not integrable: symbol tail decays like 1/w")


def log_G1(spec):
    """ln G1(psi) = (1/2pi) int log psi dw (ordinary determinant rate)."""
    if spec.is_trivial:
        return 0j
    _check_log_integrable(spec)
    return _integrate_symbol(spec, lambda w: log_symbol(spec, w))[0] / (2 * np.pi)


def trace_density(spec):
    """(1/2pi) int (psi - 1) dw = k(0), the trace per unit length."""
    if spec.is_trivial:
        return 0j
    _check_log_integrable(spec)
    return _integrate_symbol(spec, lambda w: eval_symbol(spec, w) - 1.0)[0] / (2 * np.pi)


class WHFactors:
    """Normalized Wiener-Hopf factors b = b_minus * b_plus of a winding-free b.

    log b_plus(z)  =  (1/2 pi i) int log b(u) / (u - z) du,  Im z > 0
    log b_minus(z) = -(1/2 pi i) int log b(u) / (u - z) du,  Im z < 0

    On the real line the Plemelj rule gives the boundary values
    log b_pm(w) = log b(w) / 2 +- (1/2 pi i) PV int log b(u) / (u - w) du.
    """

    def __init__(self, log_b, breakpoints=(), scale=1.0, log_b_at=None, support=None):
        self.log_b = log_b
        self.breakpoints = tuple(sorted(set(float(p) for p in breakpoints) | {-scale, scale}))
        self.scale = float(scale)
        self._log_b_at = log_b_at or (lambda w: complex(log_b(np.array([w]))[0]))
        self.support = support

    def _cauchy(self, z):
        z = complex(z)
        pts = list(self.breakpoints) + [z.real]
        val, _ = integrate_line(lambda u: self.log_b(u) / (u - z), pts, tail_scale=self.scale)
        return complex(val) / (2j * np.pi)

    def _pv(self, w0, half_width=None):
        r = half_width or self.scale
        f0 = self._log_b_at(w0)
        floor = max(4 * np.spacing(abs(w0)), 1e-30 * self.scale)

        def folded(x):
            out = np.zeros(x.shape, dtype=complex)
            ok = x > floor  # below this only roundoff noise of log b remains
            xo = x[ok]
            out[ok] = (self.log_b(w0 + xo) - self.log_b(w0 - xo)) / xo
            return out

        inner_pts = sorted({0.0, r} | {abs(p - w0) for p in self.breakpoints if 0 < abs(p - w0) < r})
        inner, _ = integrate_line(folded, inner_pts, tail_scale=self.scale, lo=0.0, hi=r)
        left, _ = integrate_line(lambda u: self.log_b(u) / (u - w0),
                                 [p for p in self.breakpoints if p < w0 - r] + [w0 - r],
                                 tail_scale=self.scale, hi=w0 - r)
        right, _ = integrate_line(lambda u: self.log_b(u) / (u - w0),
                                  [p for p in self.breakpoints if p > w0 + r] + [w0 + r],
                                  tail_scale=self.scale, lo=w0 + r)
        return complex(inner + left + right), f0

    def log_plus(self, z):
        z = complex(z)
        if z.imag > 0:
            return self._cauchy(z)
        if z.imag == 0:
            pv, f0 = self._pv(z.real)
            return 0.5 * f0 + pv / (2j * np.pi)
        raise ValueError("b_plus is evaluated in the closed upper half-plane")

    def log_minus(self, z):
        z = complex(z)
        if z.imag < 0:
            return -self._cauchy(z)
        if z.imag == 0:
            pv, f0 = self._pv(z.real)
            return 0.5 * f0 - pv / (2j * np.pi)
        raise ValueError("b_minus is evaluated in the closed lower half-plane")

    def plus(self, z):
        return np.exp(self.log_plus(z))

    def minus(self, z):
        return np.exp(self.log_minus(z))


def wiener_hopf_factorize(log_b, breakpoints=(), scale=1.0, log_b_at=None):
    """Wiener-Hopf factors of b given an evaluator of its continuous logarithm."""
    return WHFactors(log_b, breakpoints, scale, log_b_at)


def symbol_wh_factors(spec):
    """WHFactors of the smooth part of ``spec``, with limits at the singular points."""
    log_b = log_smooth_remainder(spec)

    def log_b_at(w):
        if w in spec.locations:
            val = spec.limits.get(w)
            if val is None:
                val, gap = limit_value(spec, w)
                if gap > 1e-6 * max(1.0, abs(val)):
                    raise SymbolError(f"non-removable singularity at {w}")
            near = complex(log_b(np.array([w + 1e-9 * max(1.0, abs(w))]))[0])
            lv = complex(principal_log(val))
            return complex(lv.real, lv.imag + 2 * np.pi * np.round((near.imag - lv.imag) / (2 * np.pi)))
        return complex(log_b(np.array([w]))[0])

    return WHFactors(log_b, spec.breakpoints(), spec.scale, log_b_at)


def log_E1(singularities):
    """sum_j ln E(alpha_j, beta_j)."""
    return complex(sum(log_fh_constant(s.alpha, s.beta) for s in singularities))


def fh_log_transform(s, t):
    """(1/2pi) int log psi_{a,b}(w - w0) exp(-i w t) dw in closed form.

    Equals -b (1 - e^{-t}) / t for t > 0 and -a (1 - e^{-|t|}) / |t| for
    t < 0, times exp(-i w0 t); at t = 0 the mean of the one-sided limits.
    """
    t = np.asarray(t, dtype=float)
    at = np.abs(t)
    with np.errstate(invalid="ignore", divide="ignore"):
        shape = np.where(at > 0, -np.expm1(-at) / np.where(at > 0, at, 1.0), 1.0)
    coef = np.where(t > 0, s.beta, np.where(t < 0, s.alpha, 0.5 * (s.alpha + s.beta)))
    return -coef * shape * np.exp(-1j * s.location * t)


def log_fourier_log_b(spec, t, n_gauss=20):
    """s(t) = (1/2pi) int log b(w) exp(-i w t) dw for the smooth part of ``spec``."""
    t = np.asarray(t, dtype=float)
    if spec.pure_fh:
        return np.zeros(t.shape, dtype=complex)
    if spec.support is None:
        raise AsymptoticError("smooth part without finite support: log b transform unavailable")
    lo, hi = spec.support
    tm = float(np.max(np.abs(t))) if t.size else 1.0
    sing = set(spec.locations) | set(spec.grading_points)
    om, w = fourier_rule(lo, hi, singular_points=sing, t_max=max(tm, 1.0), n_gauss=n_gauss,
                         max_width=0.5 * spec.scale)
    logs = log_symbol(spec, om) if spec.full is not None else principal_log(spec.smooth_part(om))
    out = core.exp_sum(w * logs / (2 * np.pi), -1j * om, t)
    if spec.full is not None:
        for s in spec.active_singularities:
            out = out - fh_log_transform(s, t)
    return out


def _e2_partial(spec, t_max, n_gauss):
    # int_0^t_max t s(t) s(-t) dt by graded Gauss-Legendre panels in t
    x, w = fourier_rule(0.0, t_max, singular_points=(0.0,), t_max=2 * np.pi / 0.5,
                        n_gauss=n_gauss, max_width=0.5)
    both = log_fourier_log_b(spec, np.concatenate([x, -x]), n_gauss=n_gauss)
    sp, sm = both[: x.size], both[x.size:]
    return complex(np.sum(w * x * sp * sm))


def log_E2(spec, t_max=None, n_gauss=20):
    """ln E2 = int_0^inf t s(t) s(-t) dt with s the (1/2pi)-normalized transform of log b.

    The t-integral is evaluated on [0, t_max], [0, t_max/2], [0, t_max/4]
    and extrapolated; a slowly decaying tail (non-integrable fitted order)
    raises AsymptoticError.
    """
    if spec.pure_fh or spec.is_trivial:
        return 0j
    if t_max is None:
        t_max = 40.0 if not spec.active_singularities else 80.0
    vals = [_e2_partial(spec, t_max / 4, n_gauss), _e2_partial(spec, t_max / 2, n_gauss),
            _e2_partial(spec, t_max, n_gauss)]
    est, order, status = richardson(vals)
    d1, d2 = abs(vals[1] - vals[0]), abs(vals[2] - vals[1])
    if d2 > 1e-12 * max(1.0, abs(vals[2])) and (status != "ok" or order < 0.5 + 1e-9):
        raise AsymptoticError(f"slow decay of t s(t) s(-t): tail differences {d1:.3g}, {d2:.3g}")
    return complex(est)


def _plog(z):
    return complex(principal_log(complex(z)))


def log_E3(singularities, wh, eps_f=None):
    """ln E3 for one or two singularities (sorted by location).

    With singularities at w1 and w2 = w1 + eps the rational prefactor is

        (1 + i eps)^{2 a1 b2} (1 - i eps)^{2 a2 b1}
        / [(2i - eps)^{a1 b2} (-2i - eps)^{a2 b1} eps^{a2 b1 + a1 b2}]

    times prod_j [b_plus(w_j + i) / b_plus(w_j)]^{alpha_j} [b_minus(w_j - i) / b_minus(w_j)]^{beta_j};
    all powers on the principal branch.  Here alpha_j multiplies the factor
    (w/(w - i))^alpha that is analytic below the axis.
    """
    sings = sorted(singularities, key=lambda s: s.location)
    if not sings:
        return 0j
    if len(sings) > 2:
        raise AsymptoticError("interaction constant implemented for at most two singularities")
    out = 0j
    if len(sings) == 2:
        (s1, s2) = sings
        eps = s2.location - s1.location if eps_f is None else eps_f
        if not eps > 0:
            raise AsymptoticError("singularities must be separated (eps > 0)")
        a1, b1, a2, b2 = s1.alpha, s1.beta, s2.alpha, s2.beta
        out += 2 * a1 * b2 * _plog(1 + 1j * eps) + 2 * a2 * b1 * _plog(1 - 1j * eps)
        out -= a1 * b2 * _plog(2j - eps) + a2 * b1 * _plog(-2j - eps)
        out -= (a2 * b1 + a1 * b2) * _plog(eps)
    if wh is None:
        return complex(out)
    near_cut = []
    for s in sings:
        w0 = s.location
        terms = ((s.alpha, wh.log_plus, w0 + 1j), (s.beta, wh.log_minus, w0 - 1j))
        for expo, log_factor, off in terms:
            if expo == 0:
                continue
            for z, sign in ((off, 1), (w0, -1)):
                val = np.exp(log_factor(z))
                if val == 0:
                    raise AsymptoticError("zero Wiener-Hopf factor value")
                if abs(abs(np.angle(val)) - np.pi) < 1e-6:
                    near_cut.append(z)
                out += sign * expo * _plog(val)
    if near_cut:
        warnings.warn(f"branch ambiguity: factor value near the cut at {near_cut}", RuntimeWarning,
                      stacklevel=2)
    return complex(out)


def e3_reduced_prefactor(theta, eps_f):
    """Reduced X-ray prefactor (1 + i eps)^{theta/2pi} / [(2i - eps)^{theta/pi} eps^{theta/2pi}] (log)."""
    return complex((theta / (2 * np.pi)) * _plog(1 + 1j * eps_f) - (theta / np.pi) * _plog(2j - eps_f)
                   - (theta / (2 * np.pi)) * _plog(eps_f))


def predict(spec, variant="regularized", constants=True, e2_tmax=None):
    """Asymptotic decomposition of ln det_2 W_T(psi) (or ln det for ``variant='ordinary'``).

    With ``constants=False`` only the rate, exponent and E1 are evaluated and
    the E2/E3 fields are NaN.
    """
    if variant not in ("regularized", "ordinary"):
        raise ValueError("variant must be 'regularized' or 'ordinary'")
    if spec.is_trivial:
        return AsymptoticDecomposition(0j, 0j, 0j, 0j, 0j, variant)
    sings = spec.active_singularities
    rate = log_G2(spec) if variant == "regularized" else log_G1(spec)
    exponent = complex(sum(s.alpha * s.beta for s in sings))
    e1 = log_E1(sings)
    if not constants:
        nan = complex(np.nan, np.nan)
        return AsymptoticDecomposition(rate, exponent, e1, nan, nan, variant)
    e2 = log_E2(spec, t_max=e2_tmax)
    wh = None if spec.pure_fh else symbol_wh_factors(spec)
    e3 = log_E3(sings, wh)
    return AsymptoticDecomposition(rate, exponent, e1, e2, e3, variant)
