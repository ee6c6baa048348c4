import math

import numpy as np
import pytest

from volkspin.classical import (AnalyticModel, AnalyticSpinInput,
                                MonochromaticWave, SpinModel,
                                analytic_kinematics, analytic_spin_change,
                                delta_pz_estimate, initial_state,
                                integrate_motion, integrate_spin,
                                theta0_of_pz)
from volkspin.constants import C_AU
from volkspin.pulse import PulseParams, field_area, sigma_E


def pulse(n_c, e_star=10.0, omega=1.0):
    return PulseParams(e_star=e_star, omega=omega, n_c=n_c)


def test_free_motion_is_straight_line():
    p = pulse(0.5, e_star=0.0)
    state = initial_state(14.0, t=0.0, z=0.0)
    traj = integrate_motion(state, p, t_end=0.5)
    assert np.max(np.abs(traj.u - traj.u[0])) < 1e-12
    v_z = traj.u[0, 2] / state.gamma
    assert traj.z[-1] == pytest.approx(v_z * traj.t[-1], rel=1e-10)


def test_final_transverse_momentum_equals_field_area():
    # after the pulse u_x = A0 / c = -S_E exactly (light-front invariant)
    p = pulse(0.5)
    traj = integrate_motion(initial_state(0.0), p)
    assert traj.u[-1, 0] == pytest.approx(p.a0 / p.c, rel=1e-9)
    assert abs(traj.u[-1, 0]) == pytest.approx(13.333333333333334, rel=1e-9)


def test_final_longitudinal_kick():
    p = pulse(0.5)
    traj = integrate_motion(initial_state(0.0), p)
    dpz = traj.u[-1, 2] - traj.u[0, 2]
    assert dpz == pytest.approx(field_area(p) ** 2 / (2.0 * C_AU), rel=1e-8)
    assert dpz == pytest.approx(0.6487, abs=1e-3)


def test_uz_matches_monochromatic_closed_form():
    # inside a pure monochromatic wave u_z(tau) follows the closed form
    p_z = 14.0
    wave = MonochromaticWave(e_star=10.0, omega=1.0)
    state = initial_state(p_z, t=0.0, z=0.0)
    traj = integrate_motion(state, wave, t_end=4.0)
    for t, z, u in zip(traj.t, traj.z, traj.u):
        tau = t - z / C_AU
        ux, uz, gamma = analytic_kinematics(tau, p_z, 10.0, 1.0)
        assert u[0] == pytest.approx(ux, abs=1e-7)
        assert u[2] == pytest.approx(uz, abs=1e-7)


def test_spin_norm_preserved():
    for model in (SpinModel.LARMOR, SpinModel.TBMT):
        traj = integrate_motion(initial_state(14.0), pulse(1.3),
                                spin_model=model)
        norms = np.linalg.norm(traj.s, axis=1)
        assert np.max(np.abs(norms - 0.5)) < 1e-9


def test_free_field_spin_constant():
    traj = integrate_motion(initial_state(14.0), pulse(0.5, e_star=0.0),
                            t_end=0.5, spin_model=SpinModel.TBMT)
    assert np.max(np.abs(traj.s - traj.s[0])) < 1e-12


def test_integrate_spin_reuses_trajectory():
    p = pulse(0.7)
    traj = integrate_motion(initial_state(0.0), p)
    with_spin = integrate_spin(traj, p, SpinModel.TBMT)
    assert with_spin.s is not None
    assert with_spin.t[-1] == pytest.approx(traj.t[-1])
    assert with_spin.z[-1] == pytest.approx(traj.z[-1], rel=1e-9)


def test_larmor_matches_nr_closed_form():
    # Delta s_x = (1/2) sin(2 sigma) for theta0 = 0 (nonrelativistic model)
    p = pulse(0.5)
    traj = integrate_motion(initial_state(0.0, theta0=0.0), p,
                            spin_model=SpinModel.LARMOR)
    ds = traj.s[-1] - traj.s[0]
    sig = sigma_E(p)
    assert ds[0] == pytest.approx(0.5 * math.sin(2.0 * sig), abs=1e-6)
    assert ds[0] == pytest.approx(0.048572, abs=1e-5)


def test_tbmt_matches_rel_closed_form():
    # Delta s_x = sigma / (1 + sigma^2) for p_z = 0, theta0 = 0
    p = pulse(0.5)
    traj = integrate_motion(initial_state(0.0, theta0=0.0), p,
                            spin_model=SpinModel.TBMT)
    ds = traj.s[-1] - traj.s[0]
    sig = sigma_E(p)
    assert ds[0] == pytest.approx(sig / (1.0 + sig * sig), abs=1e-3)
    assert ds[0] == pytest.approx(0.048535, abs=1e-4)


def test_analytic_spin_change_values():
    zero = analytic_spin_change(AnalyticSpinInput(sigma=0.0, theta0=0.3,
                                                  p_z=14.0))
    assert np.all(zero == 0.0)
    rel = analytic_spin_change(AnalyticSpinInput(
        sigma=0.05, theta0=0.0, p_z=0.0, model=AnalyticModel.REL))
    assert rel[0] == pytest.approx(0.05 / 1.0025, rel=1e-10)
    assert rel[2] == pytest.approx(-0.0025 / 1.0025, rel=1e-10)
    assert rel[1] == 0.0


def test_analytic_models_agree_for_small_sigma():
    sig, th0 = 1e-3, 0.0
    results = [analytic_spin_change(AnalyticSpinInput(
        sigma=sig, theta0=th0, p_z=0.0, model=m))
        for m in AnalyticModel]
    for r in results[1:]:
        assert np.max(np.abs(r - results[0])) < 5.0 * sig**3


def test_vertex_of_dsz_nr():
    # extremum of Delta s_z^NR(sigma) sits at sigma* = -(1/2) tan(theta0)
    th0 = theta0_of_pz(14.0)
    sigmas = np.linspace(-0.15, 0.15, 3001)
    dsz = np.array([analytic_spin_change(AnalyticSpinInput(
        sigma=s, theta0=th0, model=AnalyticModel.NR))[2] for s in sigmas])
    s_star = sigmas[np.argmax(dsz)]
    assert s_star == pytest.approx(-0.5 * math.tan(th0), abs=5e-4)
    assert s_star == pytest.approx(-0.051, abs=2e-3)


def test_theta0_values():
    assert theta0_of_pz(0.0) == 0.0
    assert theta0_of_pz(14.0) == pytest.approx(0.102, abs=5e-4)
    assert theta0_of_pz(70.0) == pytest.approx(0.472, abs=5e-4)


def test_analytic_kinematics_initial_and_quarter_cycle():
    ux, uz, gamma = analytic_kinematics(0.0, 14.0, 10.0, 1.0)
    pi_z = math.sqrt(1.0 + (14.0 / C_AU) ** 2)
    assert (ux, uz) == (0.0, 14.0)
    assert gamma == pytest.approx(pi_z, rel=1e-12)
    u0 = -10.0  # e E*/omega with e = -1
    ux, uz, _ = analytic_kinematics(math.pi / 2, 0.0, 10.0, 1.0)
    assert ux == pytest.approx(u0, rel=1e-12)
    assert uz == pytest.approx(u0 * u0 / (2.0 * C_AU), rel=1e-12)


def test_sigma_tau_is_minus_ux_over_2c():
    # the running dimensionless area equals -u_x(tau)/(2c) for any phi0
    for phi0 in (0.0, 0.9):
        tau = np.linspace(0.0, 5.0, 50)
        ux, _, _ = analytic_kinematics(tau, 0.0, 10.0, 1.0, phi0=phi0)
        # S_E(tau) = int_0^tau E dt with E = E* cos(omega t + phi0)
        s_tau = 10.0 * (np.sin(tau + phi0) - math.sin(phi0))
        assert np.max(np.abs(s_tau / (2 * C_AU) + ux / (2 * C_AU))) < 1e-12


def test_delta_pz_estimate_values():
    assert delta_pz_estimate(0.0, 0.0) == 0.0
    assert delta_pz_estimate(0.0, 14.0) == pytest.approx(0.715, abs=1e-3)
    assert delta_pz_estimate(0.0, 140.0) == pytest.approx(71.5, abs=0.1)
    # p_z -> 0 limit is S_E^2/(2c)
    assert delta_pz_estimate(0.0, 5.0) == pytest.approx(25.0 / (2 * C_AU),
                                                        rel=1e-12)
