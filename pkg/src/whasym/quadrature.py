"""Quadrature rules shared by the kernel, determinant and asymptotic modules.

Two families are provided:

* double-exponential rules (tanh-sinh on finite segments, exp-sinh on
  half-lines) for non-oscillatory integrals whose integrands carry algebraic
  or logarithmic endpoint singularities;
* composite Gauss-Legendre panels with geometric grading towards singular
  points, for Fourier integrals evaluated at many frequencies at once.
"""

from dataclasses import dataclass

import numpy as np

__all__ = [
    "tanh_sinh",
    "exp_sinh",
    "LineRule",
    "line_rule",
    "fourier_rule",
    "integrate_line",
]

_DE_STEP = 1.0 / 24.0
_DE_UMAX = 6.5


def _de_abscissae(step):
    k = np.arange(-int(_DE_UMAX / step), int(_DE_UMAX / step) + 1)
    return k * step


def tanh_sinh(a, b, step=_DE_STEP):
    """Tanh-sinh nodes on [a, b].

    Returns ``(x, w, da, db)`` where ``da = x - a`` and ``db = b - x`` are
    computed without cancellation, so integrands singular at an endpoint can
    be evaluated accurately right up to it.
    """
    u = _de_abscissae(step)
    s = 0.5 * np.pi * np.sinh(u)
    half = 0.5 * (b - a)
    # 1 + tanh(s) and 1 - tanh(s) without cancellation
    e = np.exp(-2.0 * np.abs(s))
    big = 2.0 / (1.0 + e)
    small = 2.0 * e / (1.0 + e)
    one_plus = np.where(s >= 0, big, small)
    one_minus = np.where(s >= 0, small, big)
    da = half * one_plus
    db = half * one_minus
    x = np.where(da <= db, a + da, b - db)
    sech2 = 4.0 * e / (1.0 + e) ** 2
    w = half * step * 0.5 * np.pi * np.cosh(u) * sech2
    # nodes nearer than 1e-290 carry no weight and overflow |x - a|^-p integrands;
    # nodes whose x rounds onto an endpoint are kept since da, db stay exact
    keep = (w > 0) & (np.minimum(da, db) > 1e-290)
    return x[keep], w[keep], da[keep], db[keep]


def exp_sinh(a, direction=1.0, scale=1.0, step=_DE_STEP):
    """Exp-sinh nodes on the half-line from ``a`` towards ``direction * inf``.

    Returns ``(x, w, d)`` with ``d = |x - a|``.
    """
    # reaches d ~ 1e-290 at the start for endpoint singularities, ~4e18 at the far end
    u = np.arange(-int(_DE_UMAX / step), int(4.0 / step) + 1) * step
    s = 0.5 * np.pi * np.sinh(u)
    d = scale * np.exp(s)
    w = scale * step * 0.5 * np.pi * np.cosh(u) * np.exp(s)
    x = a + direction * d
    keep = np.isfinite(w) & (d > 1e-290) & (d < 1e200) & (x != a)
    return x[keep], w[keep], d[keep]


@dataclass(frozen=True)
class LineRule:
    """Nodes and weights on the real line, with distance to the nearest breakpoint."""

    x: np.ndarray
    w: np.ndarray
    dist: np.ndarray

    def integrate(self, values):
        return np.sum(self.w * values)


def line_rule(breakpoints, tail_scale=1.0, step=_DE_STEP, lo=None, hi=None):
    """Composite double-exponential rule for the whole real line.

    The line is cut at every breakpoint; finite pieces use tanh-sinh and the
    two outer pieces exp-sinh with length scale ``tail_scale``.  If ``lo``/``hi``
    are given the rule stops there instead of extending to infinity.
    """
    pts = np.unique(np.asarray(breakpoints, dtype=float))
    xs, ws, ds = [], [], []
    if lo is None:
        x, w, d = exp_sinh(pts[0], -1.0, tail_scale, step)
        xs.append(x), ws.append(w), ds.append(d)
    else:
        pts = np.unique(np.concatenate([[lo], pts[pts > lo]]))
    if hi is not None:
        pts = np.unique(np.concatenate([pts[pts < hi], [hi]]))
    for a, b in zip(pts[:-1], pts[1:]):
        x, w, da, db = tanh_sinh(a, b, step)
        ok = (x != a) & (x != b)  # integrands here are evaluated at x itself
        xs.append(x[ok]), ws.append(w[ok]), ds.append(np.minimum(da, db)[ok])
    if hi is None:
        x, w, d = exp_sinh(pts[-1], 1.0, tail_scale, step)
        xs.append(x), ws.append(w), ds.append(d)
    return LineRule(np.concatenate(xs), np.concatenate(ws), np.concatenate(ds))


def integrate_line(f, breakpoints, tail_scale=1.0, tol=1e-11, lo=None, hi=None):
    """Integrate ``f`` over the real line (or [lo, hi]) with step halving.

    Returns ``(value, error_estimate)``; the estimate is the change between
    the last two step sizes.
    """
    prev = None
    step = 1.0 / 8.0
    for _ in range(4):
        rule = line_rule(breakpoints, tail_scale, step, lo=lo, hi=hi)
        vals = f(rule.x)
        val = np.sum(rule.w * vals)
        if prev is not None and abs(val - prev) <= tol * max(1.0, abs(val)):
            return val, abs(val - prev)
        prev = val
        step *= 0.5
    return val, abs(val - prev)


_GL_CACHE = {}


def _gauss_legendre(n):
    if n not in _GL_CACHE:
        _GL_CACHE[n] = np.polynomial.legendre.leggauss(n)
    return _GL_CACHE[n]


def _grade_floor(p):
    # nodes cannot resolve distances below roundoff of the singular point
    return 1e-34 if p == 0 else 1e-16 * abs(p)


def _panels(a, b, wmax, grade_left, grade_right, ratio=0.15):
    """Panel edges on [a, b]; geometric grading at flagged endpoints."""
    length = b - a
    n = max(1, int(np.ceil(length / wmax)))
    edges = list(np.linspace(a, b, n + 1))
    if grade_left:
        first = edges[1] - a
        g = []
        s = first * ratio
        while s > _grade_floor(a):
            g.append(a + s)
            s *= ratio
        edges = [a] + sorted(g) + edges[1:]
    if grade_right:
        last = b - edges[-2]
        g = []
        s = last * ratio
        while s > _grade_floor(b):
            g.append(b - s)
            s *= ratio
        edges = edges[:-1] + sorted(g) + [b]
    return np.asarray(edges)


def fourier_rule(lo, hi, singular_points=(), breakpoints=(), t_max=1.0,
                 n_gauss=20, max_width=0.5):
    """Nodes and weights for integrals of f(w) exp(-i w t) over [lo, hi].

    Panel widths are capped at ``min(max_width, 2 pi / t_max)`` so each
    oscillation is sampled by roughly ``n_gauss`` nodes; panels are graded
    geometrically towards each singular point.
    """
    sing = np.asarray(sorted(set(float(s) for s in singular_points)), dtype=float)
    cuts = set(float(p) for p in breakpoints) | set(sing.tolist()) | {float(lo), float(hi)}
    cuts = np.asarray(sorted(c for c in cuts if lo <= c <= hi))
    wmax = min(max_width, 2.0 * np.pi / max(t_max, 1e-12))
    gx, gw = _gauss_legendre(n_gauss)
    xs, ws = [], []
    for a, b in zip(cuts[:-1], cuts[1:]):
        if b <= a:
            continue
        edges = _panels(a, b, wmax, np.any(sing == a), np.any(sing == b))
        left, right = edges[:-1], edges[1:]
        half = 0.5 * (right - left)
        mid = 0.5 * (right + left)
        xs.append((mid[:, None] + half[:, None] * gx[None, :]).ravel())
        ws.append((half[:, None] * gw[None, :]).ravel())
    x, w = np.concatenate(xs), np.concatenate(ws)
    keep = ~np.isin(x, sing)  # panels graded to 1e-16 |p| can round onto p
    return x[keep], w[keep]
