import numpy as np
import pytest
from scipy.special import gamma, hyp1f1

from whasym.quadrature import exp_sinh, fourier_rule, integrate_line, line_rule, tanh_sinh


def test_tanh_sinh_endpoint_singularities():
    x, w, da, db = tanh_sinh(0.0, 1.0)
    assert np.sum(w * da ** -0.5) == pytest.approx(2.0, abs=1e-12)
    assert np.sum(w * np.log(da)) == pytest.approx(-1.0, abs=1e-12)
    assert np.sum(w * db ** -0.75) == pytest.approx(4.0, abs=1e-9)


def test_tanh_sinh_nodes_in_closed_interval():
    x, w, da, db = tanh_sinh(-2.0, 3.0)
    assert np.all((x >= -2.0) & (x <= 3.0))
    assert np.all((da > 0) & (db > 0) & (w > 0))
    assert np.allclose(da + db, 5.0)


def test_exp_sinh_half_line():
    x, w, d = exp_sinh(1.0, 1.0, 1.0)
    assert np.sum(w * np.exp(-d)) == pytest.approx(1.0, abs=1e-12)
    x, w, d = exp_sinh(0.0, -1.0, 2.0)
    assert np.all(x < 0)
    assert np.sum(w / (1 + x * x)) == pytest.approx(np.pi / 2, abs=1e-10)


def test_integrate_line_whole_axis():
    val, err = integrate_line(lambda x: np.exp(-x * x), [0.0])
    assert val == pytest.approx(np.sqrt(np.pi), abs=1e-12)
    val, _ = integrate_line(lambda x: 1 / (1 + x * x), [-1.0, 1.0])
    assert val == pytest.approx(np.pi, abs=1e-10)


def test_integrate_line_bounded_with_cusp():
    val, _ = integrate_line(lambda x: np.abs(x) ** -0.5, [0.0], lo=-1.0, hi=1.0)
    assert val == pytest.approx(4.0, abs=1e-11)


def test_line_rule_distances():
    rule = line_rule([0.0, 1.0])
    assert np.all(rule.dist > 0)
    assert rule.integrate(np.exp(-np.abs(rule.x))) == pytest.approx(2.0, abs=1e-12)


@pytest.mark.parametrize("t", [0.0, 0.7, 3.0, 11.0, 20.0])
def test_fourier_rule_cusp_transform(t):
    # int exp(-w^2) |w|^(-1/2) exp(-i w t) dw = Gamma(1/4) 1F1(1/4; 1/2; -t^2/4)
    om, w = fourier_rule(-9.0, 9.0, singular_points=[0.0], t_max=20.0)
    val = np.sum(w * np.exp(-om * om) * np.abs(om) ** -0.5 * np.exp(-1j * om * t))
    ref = gamma(0.25) * hyp1f1(0.25, 0.5, -t * t / 4)
    assert abs(val - ref) < 1e-12


def test_fourier_rule_never_hits_singular_points():
    om, _ = fourier_rule(-5.0, 5.0, singular_points=[0.0, 1.0, -2.5], t_max=40.0)
    assert not np.any(np.isin(om, [0.0, 1.0, -2.5]))


def test_exp_sinh_endpoint_singularity():
    x, w, d = exp_sinh(0.0, 1.0, 1.0)
    assert np.sum(w * d ** -0.5 * np.exp(-d)) == pytest.approx(np.sqrt(np.pi), abs=1e-13)
