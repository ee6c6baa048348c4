import math

import numpy as np
import pytest

from volkspin.errors import GridTooSmall, ToleranceNotMet
from volkspin.numerics import (Grid1D, QuadratureSpec, fd4_derivative,
                               gauss_panels, integrate, pairwise_sum,
                               phase_bounded_edges)


def test_grid1d_validation():
    with pytest.raises(ValueError):
        Grid1D(np.array([0.0, 0.0, 1.0]), np.array([1.0, 1.0, 1.0]))
    with pytest.raises(ValueError):
        Grid1D(np.array([0.0, 1.0]), np.array([1.0, -1.0]))


def test_gauss_panels_polynomial_exact():
    # 12-node Gauss-Legendre is exact for polynomials up to degree 23
    grid = gauss_panels(np.array([-1.0, 0.3, 2.0]))
    val = pairwise_sum(list(grid.weights * grid.nodes**20))
    exact = (2.0**21 - (-1.0)**21) / 21.0
    assert abs(val - exact) < 1e-12 * abs(exact)


def test_gauss_panels_weight_sum():
    grid = gauss_panels(np.linspace(-3.0, 5.0, 17))
    assert abs(grid.weights.sum() - 8.0) < 1e-12


def test_integrate_known_value():
    val, err = integrate(np.sin, 0.0, math.pi)
    assert abs(val - 2.0) < 1e-12
    assert err < 1e-11


def test_integrate_oscillatory():
    k = 50.0
    val, _ = integrate(lambda x: np.cos(k * x), 0.0, 1.0)
    assert abs(val - math.sin(k) / k) < 1e-12


def test_integrate_reversed_interval_sign():
    fwd, _ = integrate(np.exp, 0.0, 1.0)
    rev, _ = integrate(np.exp, 1.0, 0.0)
    assert rev == -fwd


def test_integrate_panel_budget_exhausted():
    spec = QuadratureSpec(rel_tol=1e-14, abs_tol=1e-300, max_panels=4)
    with pytest.raises(ToleranceNotMet) as info:
        integrate(lambda x: np.cos(200.0 * x) / np.sqrt(np.abs(x) + 1e-12),
                  0.0, 1.0, spec)
    assert info.value.value is not None


def test_phase_bounded_edges_limits_phase_advance():
    rate = lambda x: 10.0 + 40.0 * np.abs(x)
    edges = phase_bounded_edges(rate, -1.0, 1.0, math.pi / 4)
    for lo, hi in zip(edges[:-1], edges[1:]):
        worst = max(rate(np.array([lo, hi])))
        assert worst * (hi - lo) <= math.pi / 4 + 1e-12


def test_pairwise_sum_fixed_tree():
    rng = np.random.default_rng(3)
    vals = list(rng.normal(size=1001))
    assert pairwise_sum(vals) == pairwise_sum(list(vals))
    assert pairwise_sum([]) == 0.0
    assert abs(pairwise_sum(vals) - math.fsum(vals)) < 1e-10


def test_fd4_derivative_order():
    x = np.linspace(0.0, 1.0, 101)
    h = x[1] - x[0]
    d = fd4_derivative(np.sin(5.0 * x), h)
    assert np.max(np.abs(d - 5.0 * np.cos(5.0 * x[2:-2]))) < 2e-6
    with pytest.raises(GridTooSmall):
        fd4_derivative(np.zeros(4), 0.1)
