"""Relativistic spin operators and mean-spin evaluation on wave packets.

Four competing operator definitions (Pauli, Foldy-Wouthuysen, Frenkel,
Pryce) plus the Lorentz-boost rest-frame route.  Matrices are built for a
c-number kinetic momentum ``pi = p_kin / c``; in the momentum representation
each grid node supplies its own pi via the minimal-coupling substitution
p -> p + A/c with the constant post-pulse vector potential.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .bispinors import ALPHA, BETA, SIGMA_BIG, boost_matrix_inverse
from .errors import FieldNotConstant, RepresentationMismatch, ZeroMomentum
from .numerics import pairwise_sum
from .volkov import Representation, WaveFunctionSample

__all__ = [
    "SpinOperatorKind",
    "SpinReport",
    "spin_matrix",
    "mean_spin",
    "rest_frame_spin",
    "helicity_mean",
]

_EYE4 = np.eye(4)
_EPS = np.zeros((3, 3, 3))
_EPS[0, 1, 2] = _EPS[1, 2, 0] = _EPS[2, 0, 1] = 1.0
_EPS[0, 2, 1] = _EPS[2, 1, 0] = _EPS[1, 0, 2] = -1.0


class SpinOperatorKind(str, Enum):
    PAULI = "PAULI"
    FW = "FW"
    FRENKEL = "FRENKEL"
    PRYCE = "PRYCE"
    BOOST_REST_FRAME = "BOOST_REST_FRAME"


def spin_matrix(kind: SpinOperatorKind, pi) -> np.ndarray:
    """Spin-operator matrices for kinetic momentum ``pi`` (units of c).

    Returns shape (..., 3, 4, 4) for ``pi`` of shape (..., 3): the x, y, z
    component matrices at each momentum.  PAULI ignores ``pi``.
    """
    kind = SpinOperatorKind(kind)
    pi = np.asarray(pi, dtype=float)
    if pi.shape[-1:] != (3,):
        raise ValueError("pi must have a trailing axis of length 3")
    shape = pi.shape[:-1]
    half_sigma = 0.5 * np.broadcast_to(SIGMA_BIG, shape + (3, 4, 4))
    if kind is SpinOperatorKind.PAULI:
        return half_sigma.copy()
    if kind is SpinOperatorKind.BOOST_REST_FRAME:
        raise ValueError("BOOST_REST_FRAME has no single matrix form; "
                         "use rest_frame_spin")
    # cross(pi, alpha)_i = eps_ijk pi_j alpha_k
    cross = np.einsum("ijk,...j,kab->...iab", _EPS, pi, ALPHA)
    if kind is SpinOperatorKind.FRENKEL:
        return half_sigma + 0.5j * BETA @ cross
    pi2 = np.asarray(np.einsum("...j,...j->...", pi, pi))
    if kind is SpinOperatorKind.PRYCE:
        if np.any(pi2 == 0.0):
            raise ZeroMomentum("Pryce operator undefined at pi = 0")
        sig_dot = np.einsum("...j,jab->...ab", pi, SIGMA_BIG)
        proj = np.einsum("...ab,...i->...iab", (_EYE4 - BETA) @ sig_dot,
                         pi / pi2[..., None])
        return 0.5 * BETA @ SIGMA_BIG + 0.5 * proj
    if kind is SpinOperatorKind.FW:
        r = np.sqrt(1.0 + pi2)
        # pi x (Sigma x pi) = Sigma pi^2 - pi (pi . Sigma)
        sig_dot = np.einsum("...j,jab->...ab", pi, SIGMA_BIG)
        trans = (pi2[..., None, None, None] * SIGMA_BIG
                 - np.einsum("...i,...ab->...iab", pi, sig_dot))
        return (half_sigma
                + np.asarray(0.5j / r)[..., None, None, None]
                * (BETA @ cross)
                - trans
                / np.asarray(2.0 * r * (r + 1.0))[..., None, None, None])
    raise ValueError(f"unknown kind {kind}")


def _kinetic_pi(sample: WaveFunctionSample) -> np.ndarray:
    """Per-node kinetic momentum over c, with the constant-A substitution."""
    if sample.A_at_packet is None:
        raise FieldNotConstant(
            "packet overlaps the pulse; momentum-representation spin "
            "operators are defined only for a constant vector potential")
    c = _speed_of_light(sample)
    n = len(sample.grid)
    pi = np.empty((n, 3))
    pi[:, 0] = (sample.p_x + sample.A_at_packet / c) / c
    pi[:, 1] = sample.p_y / c
    pi[:, 2] = sample.grid.nodes / c
    return pi


def _speed_of_light(sample: WaveFunctionSample) -> float:
    # the sample is representation-agnostic about c; stored alongside pulses
    from .constants import C_AU
    return getattr(sample, "c", C_AU)


def _require(sample: WaveFunctionSample, rep: Representation, kind):
    if sample.representation is not rep:
        raise RepresentationMismatch(
            f"{kind} expects the {rep.value} representation, got "
            f"{sample.representation.value}")


def mean_spin(sample: WaveFunctionSample, kind: SpinOperatorKind) -> np.ndarray:
    """Mean spin vector <s> of the sample for the requested operator.

    PAULI is a plain Sigma/2 expectation in the coordinate representation;
    all other kinds act node-diagonally in the momentum representation with
    the minimal-coupling kinetic momentum.
    """
    kind = SpinOperatorKind(kind)
    if kind is SpinOperatorKind.PAULI:
        _require(sample, Representation.COORDINATE, kind.value)
        dens = np.einsum("na,iab,nb->in", sample.values.conj(),
                         0.5 * SIGMA_BIG, sample.values).real
        return np.array([pairwise_sum(list(sample.grid.weights * dens[i]))
                         for i in range(3)])
    if kind is SpinOperatorKind.BOOST_REST_FRAME:
        return rest_frame_spin(sample)
    _require(sample, Representation.MOMENTUM, kind.value)
    mats = spin_matrix(kind, _kinetic_pi(sample))
    dens = np.einsum("na,niab,nb->in", sample.values.conj(), mats,
                     sample.values).real
    return np.array([pairwise_sum(list(sample.grid.weights * dens[i]))
                     for i in range(3)])


def rest_frame_spin(sample: WaveFunctionSample) -> np.ndarray:
    """Mean spin from boosting each momentum node to the particle rest frame.

    The spinor boost is not unitary, so each node is renormalized after the
    transformation; node weights are the momentum-density weights.
    """
    _require(sample, Representation.MOMENTUM, "BOOST_REST_FRAME")
    c = _speed_of_light(sample)
    p_kin = _kinetic_pi(sample) * c
    chi = np.einsum("nab,nb->na", boost_matrix_inverse(p_kin, c),
                    sample.values)
    chi2 = np.einsum("na,na->n", chi.conj(), chi).real
    dens = np.einsum("na,na->n", sample.values.conj(), sample.values).real
    spin = np.einsum("na,iab,nb->in", chi.conj(), 0.5 * SIGMA_BIG, chi).real
    ratio = np.where(chi2 > 0.0, dens / np.where(chi2 > 0.0, chi2, 1.0), 0.0)
    return np.array([pairwise_sum(list(sample.grid.weights * ratio * spin[i]))
                     for i in range(3)])


def helicity_mean(sample: WaveFunctionSample) -> float:
    """Expectation of (Sigma . pi) / (2 |pi|), identical for all operator
    kinds.  Nodes with |pi| = 0 are excluded; their weight must be < 1e-12
    of the norm."""
    _require(sample, Representation.MOMENTUM, "helicity")
    pi = _kinetic_pi(sample)
    mod = np.sqrt(np.einsum("nj,nj->n", pi, pi))
    dens = np.einsum("na,na->n", sample.values.conj(), sample.values).real
    good = mod > 0.0
    excluded = float(np.sum(sample.grid.weights[~good] * dens[~good]))
    norm = float(np.sum(sample.grid.weights * dens))
    if excluded > 1e-12 * norm:
        raise ZeroMomentum(
            f"zero-momentum nodes carry weight {excluded:.2e}")
    unit = np.where(good[:, None], pi / np.where(good, mod, 1.0)[:, None], 0.0)
    sig_dot = np.einsum("nj,jab->nab", unit, 0.5 * SIGMA_BIG)
    val = np.einsum("na,nab,nb->n", sample.values.conj(), sig_dot,
                    sample.values).real
    return float(pairwise_sum(list(sample.grid.weights * val)))


@dataclass(frozen=True)
class SpinReport:
    """Initial/final mean spin for one operator kind, with diagnostics."""

    operator: SpinOperatorKind
    s_in: np.ndarray
    s_out: np.ndarray
    helicity: float
    norm: float
    z_mean: float | None
    pz_mean: float
    t_in: float
    t_out: float

    @property
    def ds(self) -> np.ndarray:
        return self.s_out - self.s_in

    def to_json_dict(self) -> dict:
        return {
            "operator": self.operator.value,
            "s_in": [float(x) for x in self.s_in],
            "s_out": [float(x) for x in self.s_out],
            "ds": [float(x) for x in self.ds],
            "helicity": float(self.helicity),
            "norm": float(self.norm),
            "z_mean": None if self.z_mean is None else float(self.z_mean),
            "pz_mean": float(self.pz_mean),
            "t_in": float(self.t_in),
            "t_out": float(self.t_out),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=False)
