"""Symbols of truncated Wiener-Hopf operators.

A symbol is psi(w) = b(w) * prod_j psi_{alpha_j, beta_j}(w - w_j) with a
continuous, non-vanishing, winding-free smooth part b and pure
Fisher-Hartwig factors

    psi_{a,b}(w) = (w / (w - i))**a * (w / (w + i))**b,

whose arguments vanish as w -> +inf.  Physical models (X-ray edge,
flat band, Landau levels) are built by evaluating psi directly and
dividing out the Fisher-Hartwig factors to obtain b.
"""

from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from .specfun import principal_log, principal_power

__all__ = [
    "SymbolError",
    "FHSingularity",
    "PhysicalParams",
    "SymbolSpec",
    "fh_factor",
    "log_fh_factor",
    "eval_symbol",
    "log_symbol",
    "jump_parameters",
    "trivial_symbol",
    "pure_fh_symbol",
    "gaussian_bump_symbol",
    "xray_symbol",
    "xray_theta",
    "flatband_symbol",
    "magnetic_jump",
    "magnetic_symbol",
    "smooth_remainder",
    "log_smooth_remainder",
    "limit_value",
    "winding_number",
]

_REGULATOR_CUTOFF = 6.5  # exp(-6.5**2) < 1e-18


class SymbolError(ValueError):
    """Invalid symbol parameters, singular evaluation points, or non-removable singularities."""


@dataclass(frozen=True)
class FHSingularity:
    location: float
    alpha: complex
    beta: complex

    def __post_init__(self):
        a, b = complex(self.alpha), complex(self.beta)
        if abs((a + b).real) >= 1 or abs((a - b).real) >= 1:
            raise SymbolError(f"exponents ({a}, {b}) violate |Re(alpha +- beta)| < 1")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)
        object.__setattr__(self, "location", float(self.location))

    @property
    def trivial(self):
        return self.alpha == 0 and self.beta == 0


@dataclass(frozen=True)
class PhysicalParams:
    """Model parameters.  ``regulator_scale=None`` means 10 * fermi_energy.

    ``landau_cutoff`` is the damping exponent of the Landau-level sum and
    ``a0`` the real part of the flat-band Green's function; both are renamed
    to keep alpha/beta free for the singularity exponents.
    """

    m: float = 1.0
    fermi_energy: float = 1.0
    coupling: float = 0.5
    regulator_scale: Optional[float] = None
    omega_c: float = 0.5
    landau_cutoff: float = 0.1
    delta: float = 1e-2
    d0: float = 1.0
    a0: float = 1.0

    @property
    def cutoff(self):
        return 10.0 * self.fermi_energy if self.regulator_scale is None else self.regulator_scale

    def regulator(self, x):
        """Gaussian regulator Omega(x) = exp(-x^2 / Lambda^2), Omega(0) = 1."""
        x = np.asarray(x, dtype=float)
        return np.exp(-(x / self.cutoff) ** 2)

    def check_positive(self, *names):
        for name in names:
            if not getattr(self, name) > 0:
                raise SymbolError(f"parameter {name} must be positive")
        if not self.cutoff > 0:
            raise SymbolError("parameter regulator_scale must be positive")


@dataclass(frozen=True)
class SymbolSpec:
    """psi = smooth_part * prod of FH factors.

    ``smooth_part=None`` means b == 1.  ``full`` optionally evaluates psi
    directly (physical models); then b is obtained by division.  ``support``
    is an interval outside which |b - 1| (|psi - 1| when ``full`` is given)
    is below double precision, or None when it decays only algebraically.  ``grading_points`` are places
    where quadrature must refine (near-poles, cusps) without being FH points.
    """

    smooth_part: Optional[Callable] = None
    singularities: tuple = ()
    label: str = "custom"
    full: Optional[Callable] = None
    support: Optional[tuple] = None
    grading_points: tuple = ()
    scale: float = 1.0
    params: Optional[PhysicalParams] = None
    limits: dict = field(default_factory=dict, compare=False)

    @property
    def is_trivial(self):
        return self.smooth_part is None and self.full is None and all(s.trivial for s in self.singularities)

    @property
    def pure_fh(self):
        return self.smooth_part is None and self.full is None

    @property
    def active_singularities(self):
        return tuple(s for s in self.singularities if not s.trivial)

    @property
    def locations(self):
        return tuple(s.location for s in self.singularities)

    @property
    def psi_support(self):
        """Effective support of psi - 1, or None if psi - 1 has algebraic tails."""
        if self.full is not None or not self.active_singularities:
            return self.support
        return None

    def breakpoints(self):
        pts = set(self.locations) | set(self.grading_points)
        if self.support is not None:
            pts |= set(self.support)
        return tuple(sorted(pts))


def fh_factor(omega, alpha, beta):
    """Pure Fisher-Hartwig factor (w/(w-i))^alpha (w/(w+i))^beta.

    Accepts real or complex w; analytic off the segment [-i, i].
    """
    omega = np.asarray(omega, dtype=complex)
    if np.any(omega == 0):
        raise SymbolError("fh_factor: evaluation at the singular point")
    out = np.ones_like(omega)
    if alpha != 0:
        out = out * principal_power(omega / (omega - 1j), alpha)
    if beta != 0:
        out = out * principal_power(omega / (omega + 1j), beta)
    return out[()] if out.ndim == 0 else out


def log_fh_factor(omega, alpha, beta):
    """Continuous logarithm of fh_factor (arguments stay inside (-pi, pi))."""
    omega = np.asarray(omega, dtype=complex)
    out = np.zeros_like(omega)
    if alpha != 0:
        out = out + alpha * principal_log(omega / (omega - 1j))
    if beta != 0:
        out = out + beta * principal_log(omega / (omega + 1j))
    return out[()] if out.ndim == 0 else out


def _fh_product(spec, omega):
    out = np.ones(np.shape(omega), dtype=complex)
    for s in spec.active_singularities:
        out = out * fh_factor(omega - s.location, s.alpha, s.beta)
    return out


def _log_fh_product(spec, omega):
    out = np.zeros(np.shape(omega), dtype=complex)
    for s in spec.active_singularities:
        out = out + log_fh_factor(omega - s.location, s.alpha, s.beta)
    return out


def _check_regular(spec, omega):
    for loc in spec.locations:
        if np.any(np.asarray(omega) == loc):
            raise SymbolError(f"symbol evaluated at singular point {loc}")


def eval_symbol(spec, omega):
    """psi(w) for real w away from the singular points."""
    omega = np.asarray(omega, dtype=float)
    _check_regular(spec, omega)
    if spec.full is not None:
        return np.asarray(spec.full(omega), dtype=complex)
    out = _fh_product(spec, omega)
    if spec.smooth_part is not None:
        out = out * spec.smooth_part(omega)
    return out


def log_symbol(spec, omega):
    """Logarithm of psi, continuous away from the singular points."""
    omega = np.asarray(omega, dtype=float)
    _check_regular(spec, omega)
    if spec.full is not None:
        return principal_log(spec.full(omega))
    out = _log_fh_product(spec, omega)
    if spec.smooth_part is not None:
        out = out + principal_log(spec.smooth_part(omega))
    return out


def jump_parameters(limit_plus, limit_minus):
    """alpha - beta = ln(psi(w0+) / psi(w0-)) / (i pi), principal logarithm."""
    limit_plus, limit_minus = complex(limit_plus), complex(limit_minus)
    if limit_plus == 0 or limit_minus == 0:
        raise SymbolError("jump_parameters: zero one-sided limit")
    return complex(principal_log(limit_plus / limit_minus) / (1j * np.pi))


def trivial_symbol():
    return SymbolSpec(label="trivial")


def pure_fh_symbol(alpha, beta, location=0.0):
    return SymbolSpec(singularities=(FHSingularity(location, alpha, beta),), label="pure_fh")


def gaussian_bump_symbol(eps=0.5, width=1.0):
    """psi = 1 + eps exp(-(w/width)^2): smooth, real, positive."""
    if eps <= -1:
        raise SymbolError("gaussian bump must stay positive")

    def b(w):
        return 1.0 + eps * np.exp(-(np.asarray(w, dtype=float) / width) ** 2)

    return SymbolSpec(smooth_part=b, label="gaussian_bump", support=(-9.0 * width, 9.0 * width), scale=width)


def xray_theta(params):
    """theta with tan(theta) = v Omega(0) sqrt(m / (2 eps_F)), Omega(0) = 1."""
    return float(np.arctan(params.coupling * np.sqrt(params.m / (2.0 * params.fermi_energy))))


def _xray_green(params, omega):
    # F(w - eps_F) of the parabolic band, without the regulator
    omega = np.asarray(omega, dtype=float)
    ef = params.fermi_energy
    pos = np.sqrt(params.m / (2.0 * np.abs(omega)))
    return np.where(omega >= 0, 1j * np.sign(omega - ef) * pos, -pos + 0j)


def xray_symbol(params):
    """psi(w) = 1 - v F(w - eps_F) for the one-dimensional electron gas."""
    params.check_positive("m", "fermi_energy")
    if params.coupling < 0:
        raise SymbolError("parameter coupling must be non-negative")
    v, ef = params.coupling, params.fermi_energy
    if v == 0:
        return SymbolSpec(label="xray", params=params)
    theta = xray_theta(params)
    sing = (FHSingularity(0.0, 0.0, -0.5), FHSingularity(ef, -theta / np.pi, theta / np.pi))

    def full(w):
        w = np.asarray(w, dtype=float)
        return 1.0 - v * params.regulator(w - ef) * _xray_green(params, w)

    lam = params.cutoff
    support = (ef - _REGULATOR_CUTOFF * lam, ef + _REGULATOR_CUTOFF * lam)
    # b at the singular points, from the leading one-sided behaviour
    amp = v * np.sqrt(params.m / 2.0) * params.regulator(-ef)
    b0 = amp * np.exp(0.25j * np.pi) / fh_factor(-ef, sing[1].alpha, sing[1].beta)
    bf = np.sqrt(1.0 + np.tan(theta) ** 2) / fh_factor(ef, 0.0, -0.5)
    return SymbolSpec(
        singularities=sing, label="xray", full=full, support=support,
        scale=lam, params=params, limits={0.0: complex(b0), float(ef): complex(bf)},
    )


def flatband_symbol(params):
    """psi(w) = 1 - v Omega(w) D0 (a0 + i pi sgn w), single jump at w = 0."""
    if params.d0 < 0 or params.coupling < 0:
        raise SymbolError("flat band needs d0 >= 0 and coupling >= 0")
    if not params.cutoff > 0:
        raise SymbolError("parameter regulator_scale must be positive")
    g = params.coupling * params.d0
    if g == 0:
        return SymbolSpec(label="flatband", params=params)
    plus = 1.0 - g * (params.a0 + 1j * np.pi)
    minus = 1.0 - g * (params.a0 - 1j * np.pi)
    jump = jump_parameters(plus, minus)
    if abs(jump.real) >= 1:
        raise SymbolError("flat band jump outside the principal strip |Re(alpha - beta)| < 1")

    def full(w):
        w = np.asarray(w, dtype=float)
        return 1.0 - g * params.regulator(w) * (params.a0 + 1j * np.pi * np.sign(w))

    w = np.linspace(-8 * params.cutoff, 8 * params.cutoff, 4001)
    w = w[w != 0]
    if np.min(np.abs(full(w))) < 1e-12:
        raise SymbolError("flat band symbol vanishes on the real line")
    lam = params.cutoff
    return SymbolSpec(
        singularities=(FHSingularity(0.0, jump / 2, -jump / 2),), label="flatband", full=full,
        support=(-_REGULATOR_CUTOFF * lam, _REGULATOR_CUTOFF * lam), scale=lam, params=params,
        limits={0.0: complex(plus / fh_factor(1e-300, jump / 2, -jump / 2))},
    )


def _landau_terms(params):
    a = params.landau_cutoff
    if not a > 0:
        raise SymbolError("landau_cutoff must be positive for the Landau sum to converge")
    nmax = int(np.ceil(np.log(1e16) / a))
    n = np.arange(nmax + 1)
    return n, np.exp(-a * n)


def magnetic_jump(params):
    """(c, d, theta) of the Landau-level symbol at the Fermi energy.

    c = -v sum e^{-a n} (eF - n wc) / ((eF - n wc)^2 + delta^2)
    d = -v delta sum e^{-a n} / ((eF - n wc)^2 + delta^2)
    theta = arctan(d / (1 - c))
    """
    params.check_positive("omega_c", "delta")
    n, damp = _landau_terms(params)
    x = params.fermi_energy - n * params.omega_c
    den = x * x + params.delta ** 2
    c = -params.coupling * np.sum(damp * x / den)
    d = -params.coupling * params.delta * np.sum(damp / den)
    theta = float(np.arctan(d / (1.0 - c)))
    return float(c), float(d), theta


def magnetic_symbol(params):
    """psi(w) = 1 - v Omega(w - eF) sum_n e^{-a n} / (w - n wc + i delta sgn(w - eF))."""
    params.check_positive("omega_c", "delta", "fermi_energy")
    n, damp = _landau_terms(params)
    v, ef, dl = params.coupling, params.fermi_energy, params.delta
    if v == 0:
        return SymbolSpec(label="magnetic", params=params)
    levels = n * params.omega_c

    def landau_sum(w, sgn):
        w = np.asarray(w, dtype=float)
        out = np.zeros(w.shape, dtype=complex)
        for lev, dmp in zip(levels, damp):
            out += dmp / (w - lev + 1j * dl * sgn)
        return out

    def full(w):
        w = np.asarray(w, dtype=float)
        return 1.0 - v * params.regulator(w - ef) * landau_sum(w, np.sign(w - ef))

    plus = complex(1.0 - v * landau_sum(np.array(ef), 1.0))
    minus = complex(1.0 - v * landau_sum(np.array(ef), -1.0))
    jump = jump_parameters(plus, minus)
    lam = params.cutoff
    support = (ef - _REGULATOR_CUTOFF * lam, ef + _REGULATOR_CUTOFF * lam)
    inside = tuple(float(x) for x in levels if support[0] < x < support[1] and x != ef)
    sing = FHSingularity(ef, jump / 2, -jump / 2)
    return SymbolSpec(
        singularities=(sing,), label="magnetic", full=full, support=support,
        grading_points=inside, scale=lam, params=params,
    )


def log_smooth_remainder(spec):
    """Evaluator of log b = log psi - sum log psi_j, continuous across singular points."""
    if spec.pure_fh:
        return lambda w: np.zeros(np.shape(w), dtype=complex)
    if spec.full is None:
        return lambda w: principal_log(spec.smooth_part(np.asarray(w, dtype=float)))

    def log_b(w):
        w = np.asarray(w, dtype=float)
        return principal_log(spec.full(w)) - _log_fh_product(spec, w)

    return log_b


def _raw_remainder(spec, w):
    w = np.asarray(w, dtype=float)
    if spec.pure_fh:
        return np.ones(w.shape, dtype=complex)
    if spec.full is None:
        return np.asarray(spec.smooth_part(w), dtype=complex)
    return spec.full(w) / _fh_product(spec, w)


def _neville_zero(x, y):
    # polynomial extrapolation of y(x) to x = 0
    y = list(y)
    n = len(x)
    for k in range(1, n):
        for i in range(n - k):
            y[i] = (x[i + k] * y[i] - x[i] * y[i + 1]) / (x[i + k] - x[i])
    return y[0]


def limit_value(spec, w0, h0=None, levels=7):
    """One-sided limits of b at w0, extrapolated in sqrt(h).

    Returns ``(mean, mismatch)``.  The expansion in powers of sqrt(h) covers
    both square-root cusps (band edge) and ordinary Taylor behaviour.
    """
    if h0 is None:
        h0 = 1e-3 * max(1.0, abs(w0))
    h = h0 * 4.0 ** -np.arange(levels)
    x = np.sqrt(h)
    right = _neville_zero(x, _raw_remainder(spec, w0 + h))
    left = _neville_zero(x, _raw_remainder(spec, w0 - h))
    return 0.5 * (right + left), abs(right - left)


def smooth_remainder(spec, tol=1e-6):
    """Evaluator for b = psi / prod psi_j, finite at the singular points.

    At a singular location the analytic limit is used when the model supplies
    one, otherwise the extrapolated two-sided limit; a mismatch between the
    one-sided limits larger than ``tol`` (relative) raises SymbolError.
    """
    if spec.pure_fh:
        return lambda w: np.ones(np.shape(w), dtype=complex)
    cache = {}
    for loc in spec.locations:
        val, gap = limit_value(spec, loc)
        if gap > tol * max(1.0, abs(val)):
            raise SymbolError(f"non-removable singularity at {loc}: one-sided limits differ by {gap:.3g}")
        cache[loc] = spec.limits.get(loc, val)

    def b(w):
        w = np.asarray(w, dtype=float)
        at = np.zeros(w.shape, dtype=bool)
        for loc in cache:
            at |= w == loc
        safe = np.where(at, max(cache) + 1.2345, w)
        out = _raw_remainder(spec, safe)
        for loc, val in cache.items():
            out = np.where(w == loc, val, out)
        return out[()] if out.ndim == 0 else out

    return b


def winding_number(spec, radius=None, samples=200001):
    """Net argument change of b over [-R, R], in turns (default R = 50 * scale)."""
    if spec.pure_fh:
        return 0.0
    if radius is None:
        radius = 50.0 * spec.scale
    w = np.linspace(-radius, radius, samples)
    w = np.unique(np.concatenate([w, [loc + d for loc in spec.locations for d in (-1e-9, 1e-9)]]))
    w = w[~np.isin(w, spec.locations)]
    phase = np.unwrap(np.angle(_raw_remainder(spec, w)))
    return float((phase[-1] - phase[0]) / (2 * np.pi))
