import warnings

import numpy as np
import pytest

from whasym.fredholm import (
    DiscretizedOperator,
    SingularOperatorError,
    discretize,
    log_det,
    log_det2,
    refine,
    richardson,
    unwrap_to,
    wrap_phase,
)
from whasym.kernels import KernelError, KernelEvaluator
from whasym.symbols import (
    FHSingularity,
    PhysicalParams,
    SymbolSpec,
    gaussian_bump_symbol,
    pure_fh_symbol,
    trivial_symbol,
    xray_symbol,
)


class ConstantKernel:
    """k(t) = c: the Nystrom operator is rank one with eigenvalue c T."""

    route = "const"

    def __init__(self, c):
        self.c = c

    def __call__(self, t):
        return np.full(np.shape(t), self.c, dtype=complex)

    def toeplitz_values(self, h, n):
        return np.full(2 * n - 1, self.c, dtype=complex)


def _operator(K):
    K = np.asarray(K, dtype=complex)
    n = K.shape[0]
    return DiscretizedOperator(1.0, n, "test", np.zeros(n), np.ones(n), K)


def _independent_log_det2(op):
    sign, logabs = np.linalg.slogdet(op.matrix)
    return complex(logabs, np.angle(sign)) - np.sum(np.diag(op.K))


SPECS = {
    "bump": gaussian_bump_symbol(0.5),
    "fh": pure_fh_symbol(0.2, 0.2),
    "jump": pure_fh_symbol(0.15, -0.15),
    "xray": xray_symbol(PhysicalParams(coupling=np.sqrt(2.0))),
    "mixed": SymbolSpec(smooth_part=lambda w: 1 + 0.5 * np.exp(-np.asarray(w) ** 2),
                        singularities=(FHSingularity(0.0, 0.2, 0.3),), support=(-9.0, 9.0)),
}


def test_zero_kernel_gives_identity():
    op = discretize(KernelEvaluator(trivial_symbol()), 5.0, 16)
    assert np.array_equal(op.matrix, np.eye(16))
    assert log_det(op) == 0 and log_det2(op) == 0


def test_diagonal_two():
    assert log_det(_operator(np.eye(2))) == pytest.approx(2 * np.log(2), abs=1e-15)


def test_scalar_case():
    k = 0.3 + 0.2j
    assert abs(log_det2(_operator([[k]])) - (np.log(1 + k) - k)) < 1e-15


@pytest.mark.parametrize("rule", ["trapezoid", "uniform-trapezoid", "gauss-legendre"])
@pytest.mark.parametrize("c, T", [(0.3, 2.0), (-0.1, 5.0), (0.2 + 0.1j, 3.0)])
def test_rank_one_constant_kernel(rule, c, T):
    op = discretize(ConstantKernel(c), T, 40, rule)
    assert abs(np.exp(log_det(op)) - (1 + c * T)) < 1e-12


def test_rank_one_refine():
    c, T = 0.3, 2.0
    res = refine(ConstantKernel(c), T, 64)
    assert abs(res.value - (np.log(1 + c * T) - c * T)) < 1e-8


@pytest.mark.parametrize("name", sorted(SPECS))
@pytest.mark.parametrize("rule", ["trapezoid", "gauss-legendre"])
def test_det2_identity(name, rule):
    op = discretize(KernelEvaluator(SPECS[name]), 6.0, 97, rule)
    val = log_det2(op)
    assert abs(val - (log_det(op) - op.trace())) < 1e-12
    ref = _independent_log_det2(op)
    assert abs(unwrap_to(val, ref) - ref) < 1e-12


def test_grid_convergence_bump():
    k = KernelEvaluator(SPECS["bump"])
    coarse = [log_det2(discretize(k, 10.0, n + 1)) for n in (8, 16)]
    fine = [log_det2(discretize(k, 10.0, n + 1)) for n in (512, 1024)]
    assert abs(coarse[0] - coarse[1]) > 1e-4
    assert abs(fine[0] - fine[1]) < 1e-4 * abs(fine[1])


def test_monotone_convergence_bump():
    k = KernelEvaluator(SPECS["bump"])
    vals = [log_det2(discretize(k, 10.0, n + 1)) for n in (32, 64, 128, 256, 512)]
    diffs = np.abs(np.diff(vals))
    assert np.all(diffs[1:] < diffs[:-1])


def test_refine_ladder_self_consistency():
    k = KernelEvaluator(SPECS["bump"])
    a = refine(k, 10.0, 64)
    b = refine(k, 10.0, 128)
    assert abs(a.value - b.value) < 1e-6
    assert a.status == "ok" and abs(a.order - 2.0) < 0.1


def test_refine_zero_kernel():
    res = refine(KernelEvaluator(trivial_symbol()), 3.0, 16)
    assert res.value == 0 and res.error == 0


def test_refine_rejects_small_base():
    with pytest.raises(ValueError):
        refine(KernelEvaluator(SPECS["bump"]), 3.0, 32)


@pytest.mark.parametrize("name", ["bump", "fh"])
def test_rule_independence(name):
    k = KernelEvaluator(SPECS[name])
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        trap = refine(k, 8.0, 64, "trapezoid")
        gl = refine(k, 8.0, 64, "gauss-legendre")
    assert abs(trap.value - gl.value) <= 3 * max(trap.error, gl.error)


def test_xray_small_coupling_continuity():
    vals = {}
    for v in (1e-3, 1e-2):
        op = discretize(KernelEvaluator(xray_symbol(PhysicalParams(coupling=v))), 5.0, 241)
        vals[v] = abs(log_det2(op))
    C = vals[1e-2] / 1e-2
    assert vals[1e-3] <= C * 1e-3
    assert log_det2(discretize(KernelEvaluator(xray_symbol(PhysicalParams(coupling=0.0))), 5.0, 64)) == 0


def test_singular_matrix():
    with pytest.raises(SingularOperatorError):
        log_det(_operator(-np.eye(3)))


def test_non_finite_kernel():
    with pytest.raises(KernelError):
        discretize(ConstantKernel(np.nan), 1.0, 16)


def test_discretize_validation():
    k = KernelEvaluator(SPECS["bump"])
    with pytest.raises(ValueError):
        discretize(k, 0.0, 16)
    with pytest.raises(ValueError):
        discretize(k, 1.0, 4)
    with pytest.raises(ValueError):
        discretize(k, 1.0, 16, "simpson")


def test_phase_helpers():
    assert wrap_phase(3j * np.pi).imag == pytest.approx(np.pi)
    assert wrap_phase(-1j * np.pi).imag == pytest.approx(np.pi)
    assert unwrap_to(0.5 + 0.1j, 0.3 + 12.7j).imag == pytest.approx(0.1 + 4 * np.pi)


def test_richardson_exact_for_power_law():
    vals = [1.0 + 0.5 * h ** 2 for h in (0.4, 0.2, 0.1)]
    est, order, status = richardson(vals)
    assert status == "ok"
    assert order == pytest.approx(2.0)
    assert est == pytest.approx(1.0, abs=1e-14)
