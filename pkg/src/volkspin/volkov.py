"""Exact Dirac wave-packet propagation in a plane-wave pulse (Volkov basis).

The initial Gaussian bispinor packet is expanded in positive-energy Volkov
states; the expansion coefficients are time independent, so the wave function
at any later time is a single quadrature over the longitudinal canonical
momentum p_z'.  Transverse plane-wave factors are carried analytically and
all storage is one-dimensional.

After the pulse the vector potential is the constant A0 and each Volkov state
is a free plane wave with shifted canonical momentum

    P = p_z' + b,   b = [p_x A0 + A0^2/(2c)] / (eps' - c p_z'),

which gives the momentum representation directly, node by node, with the
Jacobian dP/dp_z' = 1 + b c / eps' absorbed into the quadrature weights.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .bispinors import bispinor_u, bispinor_v, free_energy, GAMMA0, GAMMA
from .classical import initial_state, integrate_motion
from .constants import C_AU
from .errors import (BoxTooSmall, FieldNotConstant, GridTooCoarse,
                     OverlapViolation)
from .numerics import Grid1D, gauss_panels, pairwise_sum, phase_bounded_edges
from .pulse import PulseParams, vector_potential, vector_potential_series

__all__ = [
    "Representation",
    "PacketSpec",
    "CoefficientTable",
    "WaveFunctionSample",
    "packet_amplitude",
    "volkov_phase_integrals",
    "volkov_function",
    "expansion_coefficients",
    "propagate",
    "observables_kinematic",
    "adjusted_geometry",
    "default_t_in",
    "default_t_out",
    "dump_coefficients",
    "dump_sample",
]

#: matrix factor (gamma^0 - gamma^3) gamma^1 of the Volkov spinor structure
N_MATRIX = (GAMMA0 - GAMMA[2]) @ GAMMA[0]

#: half-width of the packet support in units of 1/dq (tail mass < 1e-18)
PACKET_SUPPORT = 6.5

#: non-overlap requirement: Gaussian tail mass inside the pulse support
OVERLAP_TAIL = 1e-12


class Representation(str, Enum):
    COORDINATE = "COORDINATE"
    MOMENTUM = "MOMENTUM"


@dataclass(frozen=True)
class PacketSpec:
    """Gaussian wave packet: central canonical momentum, spin label, width."""

    p: np.ndarray  # (px, py, pz) central canonical momentum [a.u.]
    s: int         # spin label +-1
    dq: float      # Gaussian momentum width Delta q [a.u.]

    def __post_init__(self):
        object.__setattr__(self, "p", np.asarray(self.p, dtype=float))
        if self.p.shape != (3,):
            raise ValueError("p must be a 3-vector")
        if self.s not in (+1, -1):
            raise ValueError("spin label must be +1 or -1")
        if self.dq <= 0:
            raise ValueError("dq must be > 0")


def packet_amplitude(q, spec: PacketSpec):
    """Spectral amplitude f(q), normalized to int |f|^2 dq = 1."""
    q = np.asarray(q, dtype=float)
    dq = spec.dq
    return np.exp(-q * q / (2.0 * dq * dq)) / math.sqrt(dq * math.sqrt(math.pi))


@dataclass(frozen=True)
class CoefficientTable:
    """Volkov expansion coefficients c^(+)(p_z', s') on a quadrature grid.

    ``values[:, 0]`` is the s' = +1 column, ``values[:, 1]`` the s' = -1 one.
    Negative-energy coefficients vanish identically and are not stored.
    """

    grid: Grid1D
    values: np.ndarray  # (n, 2) complex
    p_x: float
    p_y: float
    t_in: float
    packet: PacketSpec
    pulse: PulseParams

    def norm(self) -> float:
        dens = np.abs(self.values) ** 2 @ np.ones(2)
        return float(pairwise_sum(list(self.grid.weights * dens)))


@dataclass(frozen=True)
class WaveFunctionSample:
    """Wave function on a 1D grid (z nodes or canonical p_z nodes).

    ``A_at_packet`` is the constant vector-potential value in the region where
    the packet is supported, or None when the packet still overlaps the pulse
    (in which case momentum-representation spin operators are refused).
    """

    representation: Representation
    grid: Grid1D
    values: np.ndarray  # (n, 4) complex
    t: float
    A_at_packet: float | None
    p_x: float
    p_y: float

    def norm(self) -> float:
        dens = np.einsum("ni,ni->n", self.values.conj(), self.values).real
        return float(pairwise_sum(list(self.grid.weights * dens)))


@functools.lru_cache(maxsize=32)
def _phase_series(pulse: PulseParams):
    a = vector_potential_series(pulse)
    return a, a * a


def volkov_phase_integrals(xi, pulse: PulseParams):
    """Integrals ``I1 = int_0^xi A`` and ``I2 = int_0^xi A^2`` (vectorized).

    Closed form on the pulse support; both vanish for xi <= 0 and continue
    linearly with slopes A0 and A0^2 beyond xi_max.
    """
    xi = np.asarray(xi, dtype=float)
    if pulse.n_c == 0.0:
        z = np.zeros_like(xi)
        return z[()], z[()]
    a_ser, sq_ser = _phase_series(pulse)
    scale = pulse.c / pulse.omega   # dxi = scale * d eta
    eta = np.clip(pulse.omega * xi / pulse.c, 0.0, 2.0 * math.pi * pulse.n_c)
    over = np.clip(xi - pulse.xi_max, 0.0, None)
    a0 = pulse.a0
    i1 = scale * a_ser.antiderivative_at(eta) + a0 * over
    i2 = scale * sq_ser.antiderivative_at(eta) + a0 * a0 * over
    return i1[()], i2[()]


def volkov_function(zeta: int, p_prime, s_prime: int, t, z,
                    pulse: PulseParams):
    """Volkov bispinor f^(zeta)(t, z) without the plane-wave factor.

    The caller applies e^{i zeta p'.r} (or works in the momentum
    representation); ``t`` and ``z`` broadcast to the output shape (..., 4).
    """
    if zeta not in (+1, -1):
        raise ValueError("zeta must be +1 or -1")
    p = np.asarray(p_prime, dtype=float)
    c = pulse.c
    eps = float(free_energy(p, c))
    w = (bispinor_u(p, s_prime, c) if zeta == +1
         else bispinor_v(-p, s_prime, c))
    t = np.asarray(t, dtype=float)
    z = np.asarray(z, dtype=float)
    xi = c * t - z
    i1, i2 = volkov_phase_integrals(xi, pulse)
    d = eps - c * p[2]
    phase = -zeta * eps * t - (p[0] * i1 + zeta * i2 / (2.0 * c)) / d
    coef = zeta * vector_potential(xi, pulse) / (2.0 * d)
    spinor = w + np.asarray(coef)[..., None] * (N_MATRIX @ w)
    return np.exp(1j * np.asarray(phase))[..., None] * spinor


def _scalar_phase(pz, t: float, z: float, pulse: PulseParams, p_x: float):
    """Phase of the full positive-energy Volkov plane wave at (t, z)."""
    pz = np.asarray(pz, dtype=float)
    c = pulse.c
    eps = c * np.sqrt(c * c + p_x * p_x + pz * pz)
    i1, i2 = volkov_phase_integrals(c * t - z, pulse)
    return pz * z - eps * t - (p_x * i1 + i2 / (2.0 * c)) / (eps - c * pz)


def default_t_in(packet: PacketSpec, pulse: PulseParams) -> float:
    return -pulse.l / pulse.c


def adjusted_geometry(pulse: PulseParams, packet: PacketSpec) -> PulseParams:
    """Widen the front margin L so the packet tail inside the pulse support
    stays below the non-overlap threshold."""
    l_min = 8.0 / packet.dq
    if pulse.l >= l_min:
        return pulse
    return replace(pulse, l=l_min)


def _classical_reference(packet: PacketSpec, pulse: PulseParams,
                         t_in: float, t_out: float | None):
    state0 = initial_state(p_z=float(packet.p[2]), t=t_in, z=0.0, c=pulse.c)
    return integrate_motion(state0, pulse, t_end=t_out)


def default_t_out(packet: PacketSpec, pulse: PulseParams,
                  t_in: float | None = None) -> float:
    """Final time: classical pulse-exit time plus the lag needed for the
    trailing pulse edge to clear the whole packet support."""
    if t_in is None:
        t_in = default_t_in(packet, pulse)
    traj = _classical_reference(packet, pulse, t_in, None)
    final = traj.final
    v_z = final.u[2] / final.gamma
    lag = PACKET_SUPPORT / packet.dq / (pulse.c - v_z)
    return final.t + 1.5 * lag


def _coefficient_edges(packet: PacketSpec, pulse: PulseParams,
                       eval_hints=None, width: float = 8.0,
                       min_panels: int = 24) -> np.ndarray:
    pz = float(packet.p[2])
    lo, hi = pz - width * packet.dq, pz + width * packet.dq
    edges = np.linspace(lo, hi, min_panels + 1)
    if eval_hints:
        p_x = float(packet.p[0])
        step = 1e-7 * packet.dq
        for t, z in eval_hints:
            def rate(p, t=t, z=z):
                return np.abs(_scalar_phase(p + step, t, z, pulse, p_x)
                              - _scalar_phase(p - step, t, z, pulse, p_x)
                              ) / (2.0 * step)
            extra = phase_bounded_edges(rate, lo, hi, math.pi / 4)
            edges = np.union1d(edges, extra)
        # drop near-duplicate edges so every panel keeps a finite width
        keep = np.append(True, np.diff(edges) > 1e-9 * (hi - lo))
        edges = edges[keep]
        edges[-1] = hi
    return edges


def expansion_coefficients(packet: PacketSpec, pulse: PulseParams,
                           t_in: float | None = None,
                           method: str = "ANALYTIC",
                           grid: Grid1D | None = None,
                           eval_hints=None) -> CoefficientTable:
    """Expand the initial packet in positive-energy Volkov states at t_in.

    ``method='ANALYTIC'`` uses the closed form valid when packet and pulse do
    not overlap (the Volkov states are free waves on the packet support):
    c^(+)(p_z', s') = e^{i eps' t_in} f(p_z' - p_z) delta_{s's}.
    ``method='QUADRATURE'`` integrates the inner product on a windowed z grid.
    ``eval_hints`` is an optional list of (t, z) points where the final wave
    function will be evaluated; the p_z' panels are then refined so the
    evaluation phase advances by at most pi/4 per panel.
    """
    if t_in is None:
        t_in = default_t_in(packet, pulse)
    front = -pulse.c * t_in   # distance from packet center to the pulse front
    tail = 0.5 * math.erfc(front * packet.dq) if front > 0 else 1.0
    if tail > OVERLAP_TAIL:
        raise OverlapViolation(
            f"packet tail mass {tail:.2e} inside the pulse support exceeds "
            f"{OVERLAP_TAIL:.0e}; increase the front margin L above "
            f"{8.0 / packet.dq:.1f} a.u.")
    if grid is None:
        grid = gauss_panels(_coefficient_edges(packet, pulse, eval_hints))
    pz_nodes = grid.nodes
    q = pz_nodes - packet.p[2]
    col = 0 if packet.s == +1 else 1
    values = np.zeros((len(grid), 2), dtype=complex)
    if method == "ANALYTIC":
        pvec = np.column_stack([np.full_like(pz_nodes, packet.p[0]),
                                np.full_like(pz_nodes, packet.p[1]), pz_nodes])
        eps = free_energy(pvec, pulse.c)
        values[:, col] = np.exp(1j * eps * t_in) * packet_amplitude(q, packet)
    elif method == "QUADRATURE":
        values = _coefficients_quadrature(packet, pulse, t_in, grid)
    else:
        raise ValueError(f"unknown method {method!r}")
    return CoefficientTable(grid=grid, values=values, p_x=float(packet.p[0]),
                            p_y=float(packet.p[1]), t_in=t_in, packet=packet,
                            pulse=pulse)


def _coefficients_quadrature(packet: PacketSpec, pulse: PulseParams,
                             t_in: float, grid: Grid1D) -> np.ndarray:
    """Direct z-quadrature of the inner product on the packet window."""
    dq = packet.dq
    half = min(7.5 / dq, 0.98 * (-pulse.c * t_in))
    freq = 2.0 * (grid.nodes.max() - grid.nodes.min())
    n_panels = max(24, int(math.ceil(freq * 2.0 * half / (math.pi / 2))))
    zgrid = gauss_panels(np.linspace(-half, half, n_panels + 1))
    z = zgrid.nodes
    # initial packet profile chi(z) on the window (plane factor e^{i p_z z}
    # included), from the same q nodes as the coefficient grid
    q = grid.nodes - packet.p[2]
    pvec = np.column_stack([np.full_like(grid.nodes, packet.p[0]),
                            np.full_like(grid.nodes, packet.p[1]), grid.nodes])
    u_pack = bispinor_u(pvec, packet.s, pulse.c)          # (n, 4)
    amp = grid.weights * packet_amplitude(q, packet)
    chi = np.exp(1j * np.outer(z, grid.nodes)) @ (amp[:, None] * u_pack)
    # Volkov states on the window at t_in for both spin labels
    values = np.zeros((len(grid), 2), dtype=complex)
    for col, s_prime in ((0, +1), (1, -1)):
        u_prime = bispinor_u(pvec, s_prime, pulse.c)      # (n, 4)
        eps = free_energy(pvec, pulse.c)
        i1, i2 = volkov_phase_integrals(pulse.c * t_in - z, pulse)
        d = eps - pulse.c * grid.nodes
        phase = (np.outer(z, grid.nodes)
                 - (np.outer(packet.p[0] * i1 + i2 / (2.0 * pulse.c), 1.0 / d))
                 - eps[None, :] * t_in)
        a = vector_potential(pulse.c * t_in - z, pulse)
        spinor = (u_prime[None, :, :]
                  + (a[:, None] / (2.0 * d))[:, :, None]
                  * (u_prime @ N_MATRIX.T)[None, :, :])
        f_conj = np.exp(-1j * phase)[:, :, None] * spinor.conj()
        integrand = np.einsum("znk,zk->zn", f_conj, chi)
        values[:, col] = (zgrid.weights @ integrand) / (2.0 * math.pi)
    return values


def _post_pulse_map(coeffs: CoefficientTable, a_const: float, after: bool):
    """Diagonal momentum map for a constant vector potential ``a_const``.

    ``after`` distinguishes the post-pulse region (where the phase integrals
    have accumulated their full-pulse values, even when A0 = 0 for integer
    N_c) from the field-free region ahead of the pulse.
    """
    pulse = coeffs.pulse
    c = pulse.c
    pz = coeffs.grid.nodes
    pvec = np.column_stack([np.full_like(pz, coeffs.p_x),
                            np.full_like(pz, coeffs.p_y), pz])
    eps = free_energy(pvec, c)
    d = eps - c * pz
    b = (coeffs.p_x * a_const + a_const * a_const / (2.0 * c)) / d
    jac = 1.0 + b * c / eps
    if not after:
        theta = np.zeros_like(pz)
    else:
        i1m, i2m = volkov_phase_integrals(pulse.xi_max, pulse)
        theta = (coeffs.p_x * i1m + i2m / (2.0 * c)) / d
    const_phase = b * pulse.xi_max - theta
    energy = eps + c * b
    coef = a_const / (2.0 * d)
    spinors = np.zeros((len(pz), 2, 4), dtype=complex)
    for col, s_prime in ((0, +1), (1, -1)):
        u = bispinor_u(pvec, s_prime, c)
        spinors[:, col, :] = u + coef[:, None] * (u @ N_MATRIX.T)
    return pz + b, jac, energy, const_phase, spinors


def _packet_region(coeffs: CoefficientTable, t: float):
    """Classical packet location and the constant-A value there (or None)."""
    pulse = coeffs.pulse
    if t <= coeffs.t_in:
        z_cl = 0.0
    else:
        traj = _classical_reference(coeffs.packet, pulse, coeffs.t_in, t)
        z_cl = float(traj.z[-1])
    half = PACKET_SUPPORT / coeffs.packet.dq
    xi_lo = pulse.c * t - (z_cl + half)
    xi_hi = pulse.c * t - (z_cl - half)
    if xi_lo >= pulse.xi_max:
        a_const, after = pulse.a0, True
    elif xi_hi <= 0.0:
        a_const, after = 0.0, False
    else:
        a_const, after = None, False
    return z_cl, half, a_const, after


def propagate(coeffs: CoefficientTable, t_out: float, pulse: PulseParams,
              representation: Representation,
              box: tuple[float, float] | None = None,
              max_widenings: int = 6) -> WaveFunctionSample:
    """Evaluate the propagated wave function at ``t_out``.

    MOMENTUM: per-node post-pulse mapping (requires a constant vector
    potential at the packet; raises FieldNotConstant inside the pulse).
    COORDINATE: quadrature over the coefficient grid on a z box centered on
    the classical final coordinate, auto-widened until the tail mass in the
    outermost panels drops below 1e-10.
    """
    representation = Representation(representation)
    z_cl, half, a_const, after = _packet_region(coeffs, t_out)
    if representation is Representation.MOMENTUM:
        if a_const is None:
            raise FieldNotConstant(
                "packet overlaps the pulse at t_out; the momentum "
                "representation requires a constant vector potential")
        p_nodes, jac, energy, const_phase, spinors = _post_pulse_map(
            coeffs, a_const, after)
        phase = np.exp(1j * (const_phase - energy * t_out))
        phi = np.einsum("nc,ncj->nj", coeffs.values, spinors)
        phi *= (phase / jac)[:, None]
        sample = WaveFunctionSample(
            representation=representation,
            grid=Grid1D(p_nodes, coeffs.grid.weights * jac),
            values=phi, t=t_out, A_at_packet=a_const,
            p_x=coeffs.p_x, p_y=coeffs.p_y)
        if abs(sample.norm() - 1.0) > 1e-6:
            raise GridTooCoarse(
                f"momentum-grid norm error {abs(sample.norm() - 1.0):.2e}")
        return sample

    if box is not None:
        center, hw = 0.5 * (box[0] + box[1]), 0.5 * (box[1] - box[0])
    else:
        center, hw = z_cl, half
    hw0 = hw
    for _ in range(max_widenings + 1):
        sample = _evaluate_coordinate(coeffs, t_out, pulse, center, hw,
                                      a_const)
        nodes, w = sample.grid.nodes, sample.grid.weights
        dens = np.einsum("ni,ni->n", sample.values.conj(),
                         sample.values).real * w
        edge = float(dens[nodes < center - 0.95 * hw].sum()
                     + dens[nodes > center + 0.95 * hw].sum())
        if edge <= 1e-10:
            break
        hw *= 1.5
    else:
        raise BoxTooSmall(
            f"tail mass {edge:.2e} at the box edge after widening to "
            f"{2 * hw:.1f} a.u. (initial {2 * hw0:.1f} a.u.)")
    if abs(sample.norm() - 1.0) > 1e-6:
        raise GridTooCoarse(
            f"coordinate-grid norm error {abs(sample.norm() - 1.0):.2e}")
    return sample


def _evaluate_coordinate(coeffs: CoefficientTable, t: float,
                         pulse: PulseParams, center: float, hw: float,
                         a_const: float | None) -> WaveFunctionSample:
    c = pulse.c
    pz = coeffs.grid.nodes
    pvec = np.column_stack([np.full_like(pz, coeffs.p_x),
                            np.full_like(pz, coeffs.p_y), pz])
    eps = free_energy(pvec, c)
    d = eps - c * pz
    # combined spinor weighted by the coefficients: U + (A/2d) N U per node
    u_comb = sum(coeffs.values[:, col, None]
                 * bispinor_u(pvec, s_prime, c)
                 for col, s_prime in ((0, +1), (1, -1)))
    v_comb = (u_comb @ N_MATRIX.T) / (2.0 * d)[:, None]
    wu = coeffs.grid.weights[:, None] * u_comb
    wv = coeffs.grid.weights[:, None] * v_comb
    # z panels sized by the beat frequency of the momentum content
    span = float(pz.max() - pz.min()) * 2.5  # margin for the Jacobian stretch
    n_panels = max(32, int(math.ceil(span * 2.0 * hw / (math.pi / 2))))
    zgrid = gauss_panels(np.linspace(center - hw, center + hw, n_panels + 1),
                         nodes_per_panel=12)
    z = zgrid.nodes
    values = np.empty((z.size, 4), dtype=complex)
    inv_d = 1.0 / d
    for lo in range(0, z.size, 2048):
        zs = z[lo:lo + 2048]
        i1, i2 = volkov_phase_integrals(c * t - zs, pulse)
        a = np.asarray(vector_potential(c * t - zs, pulse))
        phase = (np.outer(zs, pz) - eps[None, :] * t
                 - np.outer(coeffs.p_x * i1 + i2 / (2.0 * c), inv_d))
        e_mat = np.exp(1j * phase)
        values[lo:lo + 2048] = (e_mat @ wu + a[:, None] * (e_mat @ wv))
    values /= math.sqrt(2.0 * math.pi)
    return WaveFunctionSample(representation=Representation.COORDINATE,
                              grid=zgrid, values=values, t=t,
                              A_at_packet=a_const,
                              p_x=coeffs.p_x, p_y=coeffs.p_y)


def _write_columnar(fh_or_path, header_lines, columns):
    """Columnar dump: '#' header lines, then whitespace-separated rows."""
    own = isinstance(fh_or_path, (str, bytes))
    fh = open(fh_or_path, "w", encoding="utf-8") if own else fh_or_path
    try:
        for line in header_lines:
            fh.write(f"# {line}\n")
        for row in zip(*columns):
            fh.write(" ".join(f"{v:.17g}" for v in row) + "\n")
    finally:
        if own:
            fh.close()


def dump_coefficients(table: CoefficientTable, fh_or_path):
    """Write a CoefficientTable as a columnar text file.

    Header: packet/pulse parameters.  Rows: p_z' node, quadrature weight,
    then Re/Im pairs of the s' = +1 and s' = -1 coefficient columns.
    """
    pk, pu = table.packet, table.pulse
    header = [
        "volkspin CoefficientTable",
        f"p_x={table.p_x:.17g} p_y={table.p_y:.17g} t_in={table.t_in:.17g}",
        f"packet: p_z={pk.p[2]:.17g} s={pk.s:+d} dq={pk.dq:.17g}",
        (f"pulse: e_star={pu.e_star:.17g} omega={pu.omega:.17g} "
         f"n_c={pu.n_c:.17g} l={pu.l:.17g} l_tilde={pu.l_tilde:.17g} "
         f"c={pu.c:.17g}"),
        "columns: pz_prime weight re_c_plus im_c_plus re_c_minus im_c_minus",
    ]
    v = table.values
    _write_columnar(fh_or_path, header,
                    (table.grid.nodes, table.grid.weights,
                     v[:, 0].real, v[:, 0].imag, v[:, 1].real, v[:, 1].imag))


def dump_sample(sample: WaveFunctionSample, fh_or_path):
    """Write a WaveFunctionSample as a columnar text file.

    Header: representation, time, constant vector potential (if any),
    transverse momenta.  Rows: grid node, quadrature weight, then Re/Im
    pairs of the four bispinor components.
    """
    a = ("none" if sample.A_at_packet is None
         else f"{sample.A_at_packet:.17g}")
    header = [
        "volkspin WaveFunctionSample",
        f"representation={sample.representation.value} t={sample.t:.17g}",
        f"A_at_packet={a} p_x={sample.p_x:.17g} p_y={sample.p_y:.17g}",
        "columns: node weight " + " ".join(
            f"re_psi{k} im_psi{k}" for k in range(4)),
    ]
    cols = [sample.grid.nodes, sample.grid.weights]
    for k in range(4):
        cols += [sample.values[:, k].real, sample.values[:, k].imag]
    _write_columnar(fh_or_path, header, tuple(cols))


def observables_kinematic(sample: WaveFunctionSample):
    """Discrete (norm, <z>, <p_z>); the mean not defined in the sample's
    representation is returned as None."""
    w = sample.grid.weights
    dens = np.einsum("ni,ni->n", sample.values.conj(), sample.values).real
    norm = float(pairwise_sum(list(w * dens)))
    mean = float(pairwise_sum(list(w * dens * sample.grid.nodes))) / norm
    if sample.representation is Representation.COORDINATE:
        return norm, mean, None
    return norm, None, mean
