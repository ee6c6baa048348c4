"""Acceptance gate: one test per quantitative criterion.

Each test calls the corresponding self-verification check, which carries the
measured numbers; a failing assertion therefore prints them.  The checks are
shared with the ``verify full`` CLI report and cache their scans, so this
module runs the full quantum-classical coincidence sweeps exactly once.
"""

import pytest

from volkspin import verify


def _assert_passed(result):
    assert result.passed, f"{result.name}: {result.measured}"


def test_01_area_closed_form():
    # quadrature vs closed-form field area over the fine N_c grid, plus the
    # bracket on the largest dimensionless area
    _assert_passed(verify.check_area_closed_form())


def test_02_initial_fw_angle():
    # FW mean-spin angle of the initial packet at p_z = 14 and 70
    _assert_passed(verify.check_initial_fw_angle())


def test_03_classical_coincidence():
    # finite-pulse T-BMT vs the closed forms with the D-factor, < 1e-3
    _assert_passed(verify.check_classical_coincidence())


def test_04_vertex():
    # fitted extremum of ds_z(sigma) at sigma* = -(1/2) tan(theta0)
    _assert_passed(verify.check_vertex())


def test_05_quantum_fw_coincidence():
    # FW spin change vs co-integrated T-BMT over the full scan grid, < 1e-3
    _assert_passed(verify.check_quantum_fw_coincidence())


def test_06_operator_discrimination():
    # Pauli/Frenkel/FW x-columns agree; Pauli and FW z-columns separate;
    # Frenkel z-column vanishes at p = 0
    _assert_passed(verify.check_operator_discrimination())


def test_07_fw_pryce_boost_equivalence():
    # the three operator routes agree to 1e-10 on free initial/final packets
    _assert_passed(verify.check_fw_pryce_boost_equivalence())


def test_08_transverse_suppression():
    # |ds_y| at least five orders below the in-plane spin change everywhere
    _assert_passed(verify.check_transverse_suppression())


def test_09_kinematic_fidelity():
    # measured <p_z> change vs the closed-form momentum-kick estimate
    _assert_passed(verify.check_kinematic_fidelity())


def test_10_dq_invariance():
    # FW spin change insensitive to the packet width over four decades
    _assert_passed(verify.check_dq_invariance())


def test_11_structural_property_suites():
    # bispinor algebra, Volkov Dirac residual, expansion unitarity, spin
    # operator algebra (the `verify fast` suite)
    for result in verify.run_checks("fast"):
        _assert_passed(result)
