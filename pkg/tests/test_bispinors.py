import math

import numpy as np
import pytest

from volkspin.bispinors import (ALPHA, BETA, GAMMA, GAMMA0, SIGMA, SIGMA_BIG,
                                bispinor_u, bispinor_v, boost_matrix,
                                boost_matrix_inverse, dirac_hamiltonian,
                                free_energy)
from volkspin.constants import C_AU

RNG = np.random.default_rng(11)


def random_momenta(n=20, scale=60.0):
    return RNG.normal(scale=scale, size=(n, 3))


def test_pauli_and_dirac_matrix_algebra():
    for i in range(3):
        assert np.allclose(SIGMA[i] @ SIGMA[i], np.eye(2))
        assert np.allclose(ALPHA[i] @ ALPHA[i], np.eye(4))
        assert np.allclose(ALPHA[i] @ BETA + BETA @ ALPHA[i], 0.0)
        for j in range(i + 1, 3):
            assert np.allclose(ALPHA[i] @ ALPHA[j] + ALPHA[j] @ ALPHA[i], 0.0)
    assert np.allclose(BETA @ BETA, np.eye(4))
    # gamma^mu gamma^nu + gamma^nu gamma^mu = 2 eta^{mu nu}
    gammas = [GAMMA0, *GAMMA]
    eta = np.diag([1.0, -1.0, -1.0, -1.0])
    for mu in range(4):
        for nu in range(4):
            anti = gammas[mu] @ gammas[nu] + gammas[nu] @ gammas[mu]
            assert np.allclose(anti, 2.0 * eta[mu, nu] * np.eye(4))


def test_free_energy():
    assert free_energy(np.zeros(3)) == pytest.approx(C_AU**2)
    p = np.array([3.0, -4.0, 12.0])
    assert free_energy(p) == pytest.approx(
        C_AU * math.sqrt(C_AU**2 + 169.0), rel=1e-14)


def test_u_v_orthonormality_and_completeness():
    for p in random_momenta():
        basis = [bispinor_u(p, +1), bispinor_u(p, -1),
                 bispinor_v(p, +1), bispinor_v(p, -1)]
        gram = np.array([[np.vdot(a, b) for b in basis] for a in basis])
        assert np.max(np.abs(gram - np.eye(4))) < 1e-13
        comp = sum(np.outer(b, b.conj()) for b in basis)
        assert np.max(np.abs(comp - np.eye(4))) < 1e-13


def test_u_v_eigenrelations():
    for p in random_momenta():
        h = dirac_hamiltonian(p)
        eps = free_energy(p)
        for s in (+1, -1):
            u = bispinor_u(p, s)
            v = bispinor_v(p, s)
            assert np.linalg.norm(h @ u - eps * u) < 1e-10 * eps
            assert np.linalg.norm(h @ v + eps * v) < 1e-10 * eps


def test_rest_frame_spinors():
    u_up = bispinor_u(np.zeros(3), +1)
    u_dn = bispinor_u(np.zeros(3), -1)
    assert np.allclose(u_up, [1.0, 0.0, 0.0, 0.0])
    assert np.allclose(u_dn, [0.0, 1.0, 0.0, 0.0])


def test_bispinor_vectorized_matches_scalar():
    ps = random_momenta(6)
    batch = bispinor_u(ps, +1)
    for k, p in enumerate(ps):
        assert np.max(np.abs(batch[k] - bispinor_u(p, +1))) == 0.0


def test_boost_matrix_inverse():
    for p in random_momenta(8):
        l = boost_matrix(p)
        linv = boost_matrix_inverse(p)
        assert np.max(np.abs(linv @ l - np.eye(4))) < 1e-12
        # boosted rest spinors are positive-energy eigenvectors at p
        w = l @ bispinor_u(np.zeros(3), +1)
        h, eps = dirac_hamiltonian(p), free_energy(p)
        assert np.linalg.norm(h @ w - eps * w) < 1e-10 * eps
        assert np.linalg.norm(w) == pytest.approx(1.0, abs=1e-12)


def test_boosted_spinor_rest_frame_angle():
    # boosting u((0,0,p_z), +1) back to rest gives the two-spinor
    # (cos(theta0/2), sin(theta0/2)) with theta0 = arctan(p_z/c): the spin
    # quantization axis is tilted from +z toward +x by the momentum
    p = np.array([0.0, 0.0, 14.0])
    chi = boost_matrix_inverse(p) @ bispinor_u(p, +1)
    chi = chi / np.linalg.norm(chi)
    th0 = math.atan2(14.0, C_AU)
    expect = np.array([math.cos(th0 / 2), math.sin(th0 / 2), 0.0, 0.0])
    assert np.max(np.abs(chi - expect)) < 1e-12
