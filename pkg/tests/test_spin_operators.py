import math

import numpy as np
import pytest

from volkspin.bispinors import (ALPHA, BETA, SIGMA_BIG, bispinor_u,
                                boost_matrix_inverse)
from volkspin.constants import C_AU
from volkspin.errors import (RepresentationMismatch, ZeroMomentum)
from volkspin.pulse import PulseParams
from volkspin.spinops import (SpinOperatorKind, SpinReport, helicity_mean,
                              mean_spin, rest_frame_spin, spin_matrix)
from volkspin.volkov import (PacketSpec, Representation, adjusted_geometry,
                             default_t_in, expansion_coefficients, propagate)

RNG = np.random.default_rng(21)


def initial_sample(p_z=14.0, s=+1, dq=1e-2):
    pk = PacketSpec(p=np.array([0.0, 0.0, p_z]), s=s, dq=dq)
    pu = adjusted_geometry(PulseParams(e_star=10.0, omega=1.0, n_c=0.5), pk)
    t_in = default_t_in(pk, pu)
    coeffs = expansion_coefficients(pk, pu, t_in)
    return propagate(coeffs, t_in, pu, Representation.MOMENTUM)


def test_pauli_matrix_ignores_momentum():
    mats = spin_matrix(SpinOperatorKind.PAULI, np.array([0.3, -0.1, 0.9]))
    assert np.allclose(mats, 0.5 * SIGMA_BIG)


def test_fw_reduces_to_pauli_at_rest():
    mats = spin_matrix(SpinOperatorKind.FW, np.zeros(3))
    assert np.max(np.abs(mats - 0.5 * SIGMA_BIG)) < 1e-15


def test_frenkel_is_pauli_plus_leading_fw_term():
    # the Frenkel operator adds exactly the O(pi) term of the FW expansion
    pi = np.array([0.11, -0.07, 0.05])
    frenkel = spin_matrix(SpinOperatorKind.FRENKEL, pi)
    eps = np.zeros((3, 3, 3))
    eps[0, 1, 2] = eps[1, 2, 0] = eps[2, 0, 1] = 1.0
    eps[0, 2, 1] = eps[2, 1, 0] = eps[1, 0, 2] = -1.0
    cross = np.einsum("ijk,j,kab->iab", eps, pi, ALPHA)
    expect = 0.5 * SIGMA_BIG + 0.5j * BETA @ cross
    assert np.max(np.abs(frenkel - expect)) < 1e-15


def test_fw_minus_frenkel_is_second_order():
    # |FW - Frenkel| scales like pi^2 for small pi
    direction = np.array([0.6, 0.3, 0.74])
    direction /= np.linalg.norm(direction)
    diffs = []
    for scale in (0.1, 0.05):
        pi = scale * direction
        d = np.max(np.abs(spin_matrix(SpinOperatorKind.FW, pi)
                          - spin_matrix(SpinOperatorKind.FRENKEL, pi)))
        diffs.append(d)
        assert d < scale ** 2  # prefactor < 1
        assert d > 0.1 * scale ** 2
    # halving pi quarters the difference (second order)
    assert diffs[0] / diffs[1] == pytest.approx(4.0, rel=0.1)


def test_fw_pryce_equal_expectations_on_free_states():
    for _ in range(10):
        p = RNG.normal(scale=50.0, size=3)
        pi = p / C_AU
        fw = spin_matrix(SpinOperatorKind.FW, pi)
        pryce = spin_matrix(SpinOperatorKind.PRYCE, pi)
        for s in (+1, -1):
            u = bispinor_u(p, s)
            e_fw = np.einsum("a,iab,b->i", u.conj(), fw, u).real
            e_pr = np.einsum("a,iab,b->i", u.conj(), pryce, u).real
            assert np.max(np.abs(e_fw - e_pr)) < 1e-13


def test_boost_route_matches_fw_on_free_states():
    for _ in range(10):
        p = RNG.normal(scale=50.0, size=3)
        fw = spin_matrix(SpinOperatorKind.FW, p / C_AU)
        u = bispinor_u(p, +1)
        chi = boost_matrix_inverse(p) @ u
        rest = np.einsum("a,iab,b->i", chi.conj(), 0.5 * SIGMA_BIG, chi).real
        rest /= np.vdot(chi, chi).real
        e_fw = np.einsum("a,iab,b->i", u.conj(), fw, u).real
        assert np.max(np.abs(rest - e_fw)) < 1e-13


def test_helicity_identical_across_operators():
    # S_k . pi_hat has the same expectation for every operator kind
    for _ in range(10):
        p = RNG.normal(scale=50.0, size=3)
        pi = p / C_AU
        pi_hat = pi / np.linalg.norm(pi)
        u = bispinor_u(p, int(RNG.choice([-1, 1])))
        values = []
        for kind in (SpinOperatorKind.PAULI, SpinOperatorKind.FW,
                     SpinOperatorKind.FRENKEL, SpinOperatorKind.PRYCE):
            mats = spin_matrix(kind, pi)
            proj = np.einsum("i,iab->ab", pi_hat, mats)
            values.append(float(np.einsum("a,ab,b->", u.conj(), proj,
                                          u).real))
        assert np.max(np.abs(np.diff(values))) < 1e-13


def test_pryce_zero_momentum_raises():
    with pytest.raises(ZeroMomentum):
        spin_matrix(SpinOperatorKind.PRYCE, np.zeros(3))


def test_spin_matrix_batch_matches_scalar():
    pis = RNG.normal(scale=0.5, size=(5, 3))
    for kind in (SpinOperatorKind.FW, SpinOperatorKind.FRENKEL,
                 SpinOperatorKind.PRYCE):
        batch = spin_matrix(kind, pis)
        for k, pi in enumerate(pis):
            assert np.max(np.abs(batch[k] - spin_matrix(kind, pi))) == 0.0


def test_initial_fw_mean_spin_angle():
    sample = initial_sample(p_z=14.0, s=+1)
    s_fw = mean_spin(sample, SpinOperatorKind.FW)
    th0 = math.atan2(14.0, C_AU)
    expect = 0.5 * np.array([math.sin(th0), 0.0, math.cos(th0)])
    assert np.max(np.abs(s_fw - expect)) < 1e-6


def test_s_minus_one_packet_is_mirrored():
    up = mean_spin(initial_sample(s=+1), SpinOperatorKind.FW)
    dn = mean_spin(initial_sample(s=-1), SpinOperatorKind.FW)
    assert np.max(np.abs(up + dn)) < 1e-6


def test_boost_rest_frame_equals_fw_mean():
    sample = initial_sample(p_z=70.0)
    s_fw = mean_spin(sample, SpinOperatorKind.FW)
    s_boost = mean_spin(sample, SpinOperatorKind.BOOST_REST_FRAME)
    assert np.max(np.abs(s_fw - s_boost)) < 1e-10
    assert np.max(np.abs(rest_frame_spin(sample) - s_boost)) == 0.0


def test_helicity_mean_matches_fw_projection():
    # S_FW . pi_hat is exactly the helicity operator, so for a packet narrow
    # around p_z z_hat the mean helicity is the FW projection along z
    sample = initial_sample(p_z=14.0)
    hel = helicity_mean(sample)
    s_fw = mean_spin(sample, SpinOperatorKind.FW)
    assert hel == pytest.approx(s_fw[2], abs=1e-5)


def test_representation_mismatch_raised():
    sample = initial_sample()
    with pytest.raises(RepresentationMismatch):
        mean_spin(sample, SpinOperatorKind.PAULI)


def test_spin_report_serialization():
    report = SpinReport(operator=SpinOperatorKind.FW,
                        s_in=np.array([0.1, 0.0, 0.49]),
                        s_out=np.array([0.15, 0.0, 0.48]),
                        helicity=0.47, norm=1.0, z_mean=None, pz_mean=14.0,
                        t_in=-1.0, t_out=2.0)
    d = report.to_json_dict()
    assert list(d) == ["operator", "s_in", "s_out", "ds", "helicity", "norm",
                       "z_mean", "pz_mean", "t_in", "t_out"]
    assert d["operator"] == "FW"
    assert d["ds"][0] == pytest.approx(0.05)
    assert "FW" in report.to_json()
