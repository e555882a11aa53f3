"""Physical studies: core-hole ratio, convergence sweeps, magnetic and flat-band limits."""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from . import core
from .asymptotics import AsymptoticDecomposition, predict
from .fredholm import discretize, log_det, refine, unwrap_to
from .kernels import KernelEvaluator
from .symbols import (
    PhysicalParams,
    SymbolError,
    flatband_symbol,
    jump_parameters,
    magnetic_jump,
    xray_symbol,
)

__all__ = [
    "PhaseUnwrapError",
    "NPolicy",
    "SweepRow",
    "FitResult",
    "SweepResult",
    "core_hole_ratio",
    "fit_asymptotic",
    "convergence_sweep",
    "magnetic_limit_study",
    "flatband_study",
]


class PhaseUnwrapError(ArithmeticError):
    """Consecutive sweep points cannot be joined on one branch of the logarithm."""


@dataclass(frozen=True)
class NPolicy:
    """Grid sizes proportional to T, with a three-level refinement ladder."""

    per_unit: float = 24.0
    n_max: int = 2048
    n_min: int = 64
    levels: int = 3
    rule: str = "trapezoid"

    def __post_init__(self):
        if not self.per_unit > 0:
            raise ValueError("per_unit must be positive")
        if self.n_min < 64 or self.n_max < self.n_min:
            raise ValueError("need 64 <= n_min <= n_max")
        if self.levels < 3:
            raise ValueError("the ladder needs at least 3 levels")

    def top(self, T):
        return int(min(max(math.ceil(self.per_unit * T), self.n_min), self.n_max))

    def base(self, T):
        return max(self.n_min, self.top(T) // 2 ** (self.levels - 1))


@dataclass(frozen=True)
class SweepRow:
    T: float
    N: int
    log_det2: complex
    predicted: complex
    residual: complex
    error: float
    order: float
    status: str


@dataclass(frozen=True)
class FitResult:
    rate: complex
    exponent: complex
    constant: complex
    stderr: dict


@dataclass
class SweepResult:
    rows: list
    fit: Optional[FitResult]
    prediction: Optional[AsymptoticDecomposition]
    label: str = ""
    meta: dict = field(default_factory=dict)


def core_hole_ratio(params, T, N):
    """G(T) / G0(T) = det(I - v g0) on [0, T], trapezoid rule with N nodes."""
    if not T > 0:
        raise ValueError("T must be positive")
    kernel = KernelEvaluator(xray_symbol(params))
    return complex(np.exp(log_det(discretize(kernel, T, N, "trapezoid"))))


def fit_asymptotic(T, values):
    """Least-squares fit of values on {T, ln(T/2), 1}; standard errors need >= 4 points."""
    T = np.asarray(T, dtype=float)
    y = np.asarray(values, dtype=complex)
    if T.size < 3:
        raise ValueError("fit needs at least 3 points")
    A = np.column_stack([T, np.log(T / 2.0), np.ones_like(T)]).astype(complex)
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    dof = T.size - 3
    if dof > 0:
        resid = y - A @ coef
        sigma2 = float(np.vdot(resid, resid).real) / dof
        cov = sigma2 * np.linalg.inv((A.conj().T @ A).real)
        err = np.sqrt(np.maximum(np.diag(cov), 0.0))
    else:
        err = np.full(3, np.nan)
    stderr = {"rate": float(err[0]), "exponent": float(err[1]), "constant": float(err[2])}
    return FitResult(complex(coef[0]), complex(coef[1]), complex(coef[2]), stderr)


def _partial_prediction(pred, T):
    # prediction without the constants, for branch tracking
    return T * pred.log_g2_rate + pred.exponent * np.log(T / 2.0)


def convergence_sweep(spec, T_list, N_policy=None, prediction=None, constants=True, workers=None):
    """ln det_2 over increasing T with prediction, residual and asymptotic fit.

    The imaginary parts are joined on one branch: the first point is placed
    nearest the prediction and each later point nearest the previous one plus
    the predicted increment.  A mismatch above 0.9 pi raises PhaseUnwrapError.
    """
    T_list = [float(t) for t in T_list]
    if any(t <= 0 for t in T_list) or any(b <= a for a, b in zip(T_list, T_list[1:])):
        raise ValueError("T_list must be positive and increasing")
    policy = N_policy or NPolicy()
    if prediction is None:
        prediction = predict(spec, constants=constants)
    kernel = KernelEvaluator(spec)

    def one(T):
        return refine(kernel, T, policy.base(T), policy.rule, levels=policy.levels)

    n_workers = workers or core.thread_count()
    if n_workers > 1 and len(T_list) > 1:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            results = list(pool.map(one, T_list))
    else:
        results = [one(T) for T in T_list]

    rows = []
    prev = None
    for T, res in zip(T_list, results):
        pred = complex(prediction.predict(T))
        partial = complex(_partial_prediction(prediction, T))
        if prev is None:
            ref = pred if np.isfinite(pred) else (partial if np.isfinite(partial) else res.value)
        else:
            step = partial - complex(_partial_prediction(prediction, prev[0]))
            ref = prev[1] + (step if np.isfinite(step) else 0.0)
        value = unwrap_to(res.value, ref)
        if abs(value.imag - complex(ref).imag) > 0.9 * np.pi:
            raise PhaseUnwrapError(f"phase step near pi between T={prev[0] if prev else None} and T={T}")
        rows.append(SweepRow(T, res.levels[-1], value, pred, value - pred, res.error, res.order, res.status))
        prev = (T, value)

    fit = None
    if len(rows) >= 4:
        fit = fit_asymptotic([r.T for r in rows], [r.log_det2 for r in rows])
    return SweepResult(rows, fit, prediction, label=spec.label)


@dataclass(frozen=True)
class MagneticRow:
    delta: float
    c: float
    d: float
    theta: float
    exponent: float


def magnetic_limit_study(params, delta_list):
    """(delta, c, d, theta, -theta^2/pi^2) for decreasing delta."""
    deltas = [float(x) for x in delta_list]
    if any(x <= 0 for x in deltas) or any(b >= a for a, b in zip(deltas, deltas[1:])):
        raise ValueError("delta_list must be positive and decreasing")
    rows = []
    for dl in deltas:
        c, d, theta = magnetic_jump(replace(params, delta=dl))
        rows.append(MagneticRow(dl, c, d, theta, -theta * theta / np.pi ** 2))
    return rows


@dataclass(frozen=True)
class FlatbandResult:
    jump: complex
    exponent: complex
    note: str


def flatband_study(params):
    """Jump alpha - beta of the flat-band symbol at w = 0 and the exponent -(jump/2)^2."""
    g = params.coupling * params.d0
    if g == 0:
        return FlatbandResult(0j, 0j, "trivial symbol")
    plus = 1.0 - g * (params.a0 + 1j * np.pi)
    minus = 1.0 - g * (params.a0 - 1j * np.pi)
    jump = complex(jump_parameters(plus, minus))
    if abs(jump.real) >= 1:
        raise SymbolError("flat band jump outside the principal strip |Re(alpha - beta)| < 1")
    note = ("alpha = -beta = jump/2; the rate term depends on the regulator "
            "(divergent without it), the exponent does not")
    return FlatbandResult(jump, -(jump / 2) ** 2, note)


def default_xray_params(**overrides):
    """m = eF = 1, tan(theta) = 1, cutoff 10 eF unless overridden."""
    base = dict(m=1.0, fermi_energy=1.0, coupling=math.sqrt(2.0))
    base.update(overrides)
    return PhysicalParams(**base)
