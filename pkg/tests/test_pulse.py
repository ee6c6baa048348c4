import math

import numpy as np
import pytest

from volkspin.constants import C_AU
from volkspin.errors import DegeneratePulse
from volkspin.pulse import (PulseParams, electric_field, envelope, field_area,
                            field_area_quadrature, sigma_E, unipolarity,
                            vector_potential)


def pulse(n_c, e_star=10.0, omega=1.0):
    return PulseParams(e_star=e_star, omega=omega, n_c=n_c)


def test_params_validation():
    with pytest.raises(ValueError):
        PulseParams(e_star=-1.0, omega=1.0, n_c=0.5)
    with pytest.raises(ValueError):
        PulseParams(e_star=1.0, omega=0.0, n_c=0.5)
    with pytest.raises(ValueError):
        PulseParams(e_star=1.0, omega=1.0, n_c=-0.1)


def test_envelope_values():
    assert envelope(math.pi, 1.0) == 1.0
    assert envelope(-0.1, 1.0) == 0.0
    assert abs(envelope(math.pi / 2, 1.0) - 0.5) < 1e-15
    assert envelope(2.0 * math.pi + 0.1, 1.0) == 0.0


def test_electric_field_zeros_and_support():
    p = pulse(1.5)
    assert electric_field(0.0, p) == 0.0
    assert electric_field(p.xi_max, p) == pytest.approx(0.0, abs=1e-12)
    assert electric_field(-1.0, p) == 0.0
    assert electric_field(p.xi_max + 1.0, p) == 0.0


def test_electric_field_formula_value():
    # E(xi) = E* sin^2(omega xi / (2 N_c c)) sin(omega xi / c); at
    # xi = pi c / (2 omega) with N_c = 1/2 both factors are 1.
    p = pulse(0.5)
    xi = math.pi * C_AU / 2.0
    assert float(electric_field(xi, p)) == pytest.approx(10.0, rel=1e-14)
    # independent evaluation of the same formula
    eta = p.omega * xi / p.c
    direct = p.e_star * math.sin(eta / (2.0 * p.n_c)) ** 2 * math.sin(eta)
    assert float(electric_field(xi, p)) == pytest.approx(direct, rel=1e-14)


def test_vector_potential_before_and_after():
    p = pulse(0.5)
    assert vector_potential(-5.0, p) == 0.0
    a_end = float(vector_potential(p.xi_max, p))
    a_later = float(vector_potential(p.xi_max + 300.0, p))
    assert a_end == pytest.approx(a_later, rel=1e-14)
    assert a_end == pytest.approx(p.a0, rel=1e-12)


def test_vector_potential_integer_cycles_closes():
    p = pulse(1.0)
    assert abs(float(vector_potential(p.xi_max + 10.0, p))) < 1e-10


def test_a0_magnitude_against_quadrature():
    # |A0| = c * |S_E| = 137.035999 * 13.3333... (frozen oracle value)
    p = pulse(0.5)
    assert p.a0 == pytest.approx(-1827.1466533333335, rel=1e-12)
    s_quad = field_area_quadrature(p)
    assert p.a0 == pytest.approx(-p.c * s_quad, rel=1e-12)


def test_field_is_minus_da_dxi():
    p = pulse(1.5)
    h = 1e-4 * p.c / p.omega
    xi = np.linspace(0.5 * h, p.xi_max - 0.5 * h, 2000)
    da = (vector_potential(xi + h, p) - vector_potential(xi - h, p)) / (2 * h)
    assert np.max(np.abs(electric_field(xi, p) + da)) < 1e-8 * p.e_star


def test_field_area_closed_form_vs_quadrature():
    for n_c in [0.1, 0.25, 0.5, 0.75, 1.0 - 1e-6, 1.0, 1.0 + 1e-6, 1.3,
                1.5, 2.0]:
        p = pulse(n_c)
        closed = field_area(p)
        quad = field_area_quadrature(p)
        assert abs(closed - quad) <= 1e-10 * max(abs(closed), 1e-3)


def test_field_area_special_values():
    assert field_area(pulse(1.0)) == 0.0
    assert abs(field_area(pulse(2.0))) < 1e-14
    assert field_area(pulse(0.5)) == pytest.approx(13.333333333333334,
                                                   rel=1e-14)


def test_field_area_continuous_at_removable_singularity():
    # S_E has a removable singularity at N_c = 1 with slope -E* pi^2/(2 omega)
    left = field_area(pulse(1.0 - 1e-7))
    right = field_area(pulse(1.0 + 1e-7))
    assert abs(left) < 1e-5 and abs(right) < 1e-5
    assert abs(field_area(pulse(1.0 - 1e-10))
               - field_area(pulse(1.0 + 1e-10))) < 1e-8


def test_sigma_e_values():
    assert sigma_E(pulse(1.0)) == 0.0
    assert sigma_E(pulse(0.5)) == pytest.approx(0.04865, abs=5e-6)
    assert sigma_E(pulse(0.5, omega=0.1)) == pytest.approx(0.4865, abs=5e-5)
    # ten-fold scaling with 1/omega
    assert sigma_E(pulse(0.5, omega=0.1)) == pytest.approx(
        10.0 * sigma_E(pulse(0.5)), rel=1e-12)


def test_unipolarity_one_signed():
    assert unipolarity(pulse(0.5)) == pytest.approx(1.0, abs=1e-12)
    assert unipolarity(pulse(0.3)) == pytest.approx(1.0, abs=1e-12)


def test_unipolarity_zero_net_area():
    assert unipolarity(pulse(1.0)) == pytest.approx(0.0, abs=1e-10)


def test_unipolarity_frozen_regression():
    # quadrature value computed once and frozen
    assert unipolarity(pulse(1.5)) == pytest.approx(0.2666666666666667,
                                                    rel=1e-10)


def test_unipolarity_degenerate():
    with pytest.raises(DegeneratePulse):
        unipolarity(PulseParams(e_star=0.0, omega=1.0, n_c=0.5))
