"""Dirac matrices (standard representation) and free-particle bispinors.

The positive/negative-energy basis spinors u, v are the explicit
four-component forms normalized to ``u^dag u = 1``; together they form a
complete orthonormal set at each momentum.  Vectorized versions accept a
(..., 3) array of momenta and return (..., 4) spinors.
"""

from __future__ import annotations

import numpy as np

from .constants import C_AU

__all__ = [
    "SIGMA", "ALPHA", "BETA", "SIGMA_BIG", "GAMMA0", "GAMMA",
    "bispinor_u", "bispinor_v", "free_energy", "dirac_hamiltonian",
    "boost_matrix", "boost_matrix_inverse",
]

_I2 = np.eye(2)
SIGMA = np.array([
    [[0, 1], [1, 0]],
    [[0, -1j], [1j, 0]],
    [[1, 0], [0, -1]],
], dtype=complex)

ALPHA = np.array([np.block([[np.zeros((2, 2)), s], [s, np.zeros((2, 2))]])
                  for s in SIGMA])
BETA = np.diag([1.0, 1.0, -1.0, -1.0]).astype(complex)
SIGMA_BIG = np.array([np.block([[s, np.zeros((2, 2))], [np.zeros((2, 2)), s]])
                      for s in SIGMA])
GAMMA0 = BETA
GAMMA = np.array([BETA @ a for a in ALPHA])  # gamma^1..3


def free_energy(p, c: float = C_AU):
    """Positive free energy ``eps = c sqrt(c^2 + p^2)`` for momenta ``p``(...,3)."""
    p = np.asarray(p, dtype=float)
    return c * np.sqrt(c * c + np.sum(p * p, axis=-1))


def dirac_hamiltonian(p, c: float = C_AU) -> np.ndarray:
    """Free Dirac Hamiltonian matrix ``c alpha.p + beta c^2`` at momentum p."""
    p = np.asarray(p, dtype=float)
    return c * np.einsum("i,ijk->jk", p, ALPHA) + c * c * BETA


def _spinor_stack(p, c, positive: bool) -> np.ndarray:
    p = np.atleast_2d(np.asarray(p, dtype=float))
    px, py, pz = p[..., 0], p[..., 1], p[..., 2]
    p0 = np.sqrt(c * c + px * px + py * py + pz * pz)
    if positive:
        norm = 1.0 / (2.0 * np.sqrt(p0 * (p0 - px)))
        up = np.stack([c + p0 - px + 1j * py, pz + 0j, pz + 0j,
                       c - p0 + px + 1j * py], axis=-1)
        dn = np.stack([-pz + 0j, c + p0 - px - 1j * py,
                       c - p0 + px - 1j * py, -pz + 0j], axis=-1)
    else:
        norm = 1.0 / (2.0 * np.sqrt(p0 * (p0 + px)))
        up = np.stack([c - p0 - px + 1j * py, pz + 0j, pz + 0j,
                       c + p0 + px + 1j * py], axis=-1)
        dn = np.stack([-pz + 0j, c - p0 - px - 1j * py,
                       c + p0 + px - 1j * py, -pz + 0j], axis=-1)
    return norm[..., None] * up, norm[..., None] * dn


def bispinor_u(p, s: int, c: float = C_AU) -> np.ndarray:
    """Positive-energy bispinor u(p, s), s = +1 or -1; shape (..., 4)."""
    if s not in (+1, -1):
        raise ValueError("spin label must be +1 or -1")
    up, dn = _spinor_stack(p, c, positive=True)
    out = up if s == +1 else dn
    return out[0] if np.asarray(p).ndim == 1 else out


def bispinor_v(p, s: int, c: float = C_AU) -> np.ndarray:
    """Negative-energy bispinor v(p, s), s = +1 or -1; shape (..., 4)."""
    if s not in (+1, -1):
        raise ValueError("spin label must be +1 or -1")
    up, dn = _spinor_stack(p, c, positive=False)
    out = up if s == +1 else dn
    return out[0] if np.asarray(p).ndim == 1 else out


def boost_matrix(p, c: float = C_AU) -> np.ndarray:
    """Spinor Lorentz boost from the rest frame to momentum ``p``.

    ``L_p = ((p0 + c) + alpha.p) / sqrt(2 p0 (p0 + c))``; Hermitian but not
    unitary.  Vectorized: p of shape (..., 3) gives (..., 4, 4).
    """
    p = np.asarray(p, dtype=float)
    p0 = np.sqrt(c * c + np.sum(p * p, axis=-1))
    ap = np.einsum("...i,ijk->...jk", p, ALPHA)
    num = (p0 + c)[..., None, None] * np.eye(4) + ap
    return num / np.sqrt(2.0 * p0 * (p0 + c))[..., None, None]


def boost_matrix_inverse(p, c: float = C_AU) -> np.ndarray:
    """Inverse spinor boost, ``L_p^{-1} = ((p0 + c) - alpha.p) *
    sqrt(2 p0 (p0 + c)) / (2 c (p0 + c))``."""
    p = np.asarray(p, dtype=float)
    p0 = np.sqrt(c * c + np.sum(p * p, axis=-1))
    ap = np.einsum("...i,ijk->...jk", p, ALPHA)
    num = (p0 + c)[..., None, None] * np.eye(4) - ap
    scale = np.sqrt(2.0 * p0 * (p0 + c)) / (2.0 * c * (p0 + c))
    return num * scale[..., None, None]
