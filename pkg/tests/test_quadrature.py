import math

import numpy as np
import pytest

from qhflux.quadrature import (IntegrationError, cartesian_grid, finite_diff_gradient,
                               integrate2d, integrate_radial, polar_grid)


def test_cartesian_weights_sum_to_area():
    g = cartesian_grid(3.0, order=40)
    assert np.sum(g.weights) == pytest.approx(36.0, rel=1e-10)


def test_gaussian_integral():
    g = cartesian_grid(6.0, order=80)
    val = integrate2d(g, lambda z: np.exp(-np.abs(z) ** 2))
    assert abs(val - math.pi) < 1e-8 * math.pi


def test_gaussian_second_moment():
    g = cartesian_grid(6.0, order=80)
    val = integrate2d(g, lambda z: np.abs(z) ** 2 * np.exp(-np.abs(z) ** 2))
    assert abs(val - math.pi) < 1e-8 * math.pi


def test_polar_inverse_radius():
    g = polar_grid(0j, 1.0)
    val = integrate2d(g, lambda z: 1.0 / np.abs(z))
    assert abs(val - 2 * math.pi) < 1e-6 * 2 * math.pi


def test_polar_weights_cover_disk_area():
    g = polar_grid(0.5 + 0.5j, 2.0)
    assert np.sum(g.weights) == pytest.approx(math.pi * 4.0, rel=1e-8)


def test_polar_gaussian_about_center():
    c = 0.7 - 0.2j
    g = polar_grid(c, 8.0, panel_width=0.5)
    val = integrate2d(g, lambda z: np.exp(-np.abs(z - c) ** 2))
    assert abs(val - math.pi) < 1e-9 * math.pi


def test_polar_matches_1d_radial_rule_for_radial_integrand():
    c = 0.3 + 0.1j
    g = polar_grid(c, 5.0, panel_width=0.4)
    f2d = integrate2d(g, lambda z: np.exp(-np.abs(z - c) ** 2))
    f1d = integrate_radial(g, lambda r: math.exp(-r ** 2))
    assert abs(f2d - f1d) <= 1e-13 * abs(f1d)


def test_integration_error_identifies_node():
    g = cartesian_grid(1.0, order=4)
    with pytest.raises(IntegrationError) as err:
        integrate2d(g, lambda z: np.where(np.abs(z - g.nodes[5]) < 1e-12, np.nan, 1.0))
    assert err.value.node == g.nodes[5]


def test_finite_diff_square():
    g = finite_diff_gradient(lambda x: x[0] ** 2, np.array([3.0]), h=1e-4)
    assert abs(g[0] - 6.0) < 1e-7


def test_finite_diff_bilinear():
    g = finite_diff_gradient(lambda x: x[0] * x[1], np.array([1.0, 2.0]), h=1e-4)
    assert np.allclose(g, [2.0, 1.0], atol=1e-7)


def test_finite_diff_gradient_of_log_upsilon():
    # numerical gradient of log Upsilon in real coordinates vs the analytic
    # holomorphic-derivative assembly, N = 8
    import math
    from qhflux.partition import HoleConfig, upsilon, upsilon_derivative

    other = -0.25 + 0.3j

    def logups(y):
        cfg = HoleConfig(w=(complex(y[0], y[1]), other), N=8)
        return math.log(upsilon(cfg))

    point = np.array([0.2, 0.1])
    grad = finite_diff_gradient(logups, point, h=1e-5)
    cfg = HoleConfig(w=(complex(*point), other), N=8)
    dlog = upsilon_derivative(cfg, (1, 0), (0, 0)) / upsilon(cfg)
    analytic = 2.0 * np.array([dlog.real, -dlog.imag])
    assert np.linalg.norm(grad - analytic) <= 1e-6 * np.linalg.norm(analytic)


def test_finite_diff_is_second_order():
    f = lambda x: math.sin(x[0])
    errs = []
    for h in (1e-2, 5e-3):
        g = finite_diff_gradient(f, np.array([0.7]), h=h)
        errs.append(abs(g[0] - math.cos(0.7)))
    assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.05)
