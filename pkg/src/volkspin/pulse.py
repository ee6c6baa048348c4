"""Finite plane-wave laser pulse: field, envelope, vector potential, areas.

The pulse travels along +z and is polarized along x.  Everything depends on
space-time only through the light-front coordinate ``xi = c t - z``:

    E_x = E(xi) = e_star * sin^2(omega xi / (2 N_c c)) * sin(omega xi / c)

on the support ``0 <= xi <= xi_max = 2 pi c N_c / omega`` and zero outside.
The vector potential uses the convention ``E = -(1/c) dA/dt``, i.e.
``A(xi) = -int_0^xi E``, so after the pulse ``A0 = A_SIGN * c * S_E`` with
``A_SIGN = -1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import A_SIGN, C_AU
from .errors import DegeneratePulse
from .numerics import QuadratureSpec, integrate

__all__ = [
    "PulseParams",
    "FieldSample",
    "CosineSeries",
    "envelope",
    "electric_field",
    "vector_potential",
    "field_area",
    "field_area_quadrature",
    "sigma_E",
    "unipolarity",
]


def _sinpi(x: float) -> float:
    """sin(pi * x) with exact argument reduction near integers."""
    r = x - round(x)
    return math.sin(math.pi * r) * (1.0 if round(x) % 2 == 0 else -1.0)


@dataclass(frozen=True)
class PulseParams:
    """Pulse amplitude, carrier frequency, cycle count and geometry margins.

    All quantities are in atomic units.  ``l`` is the gap between the pulse's
    leading edge and the packet center at the initial time; ``l_tilde`` the
    rear margin used when choosing the final time.
    """

    e_star: float
    omega: float
    n_c: float
    l: float = 50.0
    l_tilde: float = 50.0
    c: float = C_AU

    def __post_init__(self):
        if self.e_star < 0:
            raise ValueError("e_star must be >= 0")
        if self.omega <= 0:
            raise ValueError("omega must be > 0")
        if self.n_c < 0:
            raise ValueError("n_c must be >= 0")
        if self.l <= 0 or self.l_tilde <= 0:
            raise ValueError("geometry margins must be > 0")

    @property
    def xi_max(self) -> float:
        """Length of the pulse support in xi."""
        return 2.0 * math.pi * self.c * self.n_c / self.omega

    @property
    def a0(self) -> float:
        """Constant vector-potential value after the pulse."""
        return A_SIGN * self.c * field_area(self)


@dataclass(frozen=True)
class FieldSample:
    """Electric field and vector potential at one light-front coordinate."""

    xi: float
    E: float
    A: float


def envelope(eta, n_c: float):
    """Smooth sin^2 envelope of the carrier phase ``eta``; 0 outside [0, 2 pi n_c]."""
    eta = np.asarray(eta, dtype=float)
    if n_c == 0.0:
        return np.zeros_like(eta)[()]
    inside = (eta >= 0.0) & (eta <= 2.0 * math.pi * n_c)
    val = np.where(inside, np.sin(eta / (2.0 * n_c)) ** 2, 0.0)
    return val[()]


def electric_field(xi, params: PulseParams):
    """Electric field E(xi) of the pulse (vectorized over ``xi``)."""
    xi = np.asarray(xi, dtype=float)
    eta = params.omega * xi / params.c
    val = params.e_star * envelope(eta, params.n_c) * np.sin(eta)
    # the envelope already vanishes outside the support, but enforce exact zeros
    inside = (eta >= 0.0) & (eta <= 2.0 * math.pi * params.n_c)
    return np.where(inside, val, 0.0)[()]


class CosineSeries:
    """Finite sum ``sum_k A_k cos(f_k x)`` with exact integrals and products.

    Used to carry the pulse's vector potential and its square in closed form;
    frequencies are kept unmerged and non-negative.
    """

    def __init__(self, terms=()):
        self.terms = [(float(a), abs(float(f))) for a, f in terms if a != 0.0]

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for a, f in self.terms:
            out = out + a * np.cos(f * x)
        return out[()]

    def antiderivative_at(self, x):
        """``int_0^x`` of the series, elementwise."""
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for a, f in self.terms:
            if f < 1e-12:
                out = out + a * x
            else:
                out = out + a * np.sin(f * x) / f
        return out[()]

    def __mul__(self, other: "CosineSeries") -> "CosineSeries":
        prod = []
        for a1, f1 in self.terms:
            for a2, f2 in other.terms:
                prod.append((0.5 * a1 * a2, f1 + f2))
                prod.append((0.5 * a1 * a2, f1 - f2))
        return CosineSeries(prod)

    def scaled(self, factor: float) -> "CosineSeries":
        return CosineSeries([(a * factor, f) for a, f in self.terms])


def _envelope_carrier_series(n_c: float) -> CosineSeries:
    """Cosine series of ``int_0^eta F(x) sin(x) dx`` as a function of eta.

    For F = sin^2(x / 2 n_c) the integrand is an elementary trig polynomial;
    the antiderivative evaluated here is ``G(eta)`` with
    ``G(2 pi n_c) = sin^2(pi n_c) / (1 - n_c^2)``.
    """
    a = 1.0 + 1.0 / n_c
    b = 1.0 - 1.0 / n_c
    terms = [(0.5, 0.0), (-0.5, 1.0)]
    const = 0.5
    if abs(b) > 1e-12:
        terms += [(0.25 / a, a), (0.25 / b, b)]
        const -= 0.25 / a + 0.25 / b
    else:
        # n_c == 1: the b-term of the antiderivative vanishes identically
        terms += [(0.25 / a, a)]
        const -= 0.25 / a
    terms[0] = (const, 0.0)
    return CosineSeries(terms)


def vector_potential_series(params: PulseParams) -> CosineSeries:
    """Closed form of A as a cosine series in ``eta = omega xi / c`` (on support)."""
    if params.n_c == 0.0:
        return CosineSeries([])
    g = _envelope_carrier_series(params.n_c)
    return g.scaled(A_SIGN * params.e_star * params.c / params.omega)


def vector_potential(xi, params: PulseParams):
    """Vector potential A(xi): 0 before the pulse, A0 = -c S_E after it."""
    xi = np.asarray(xi, dtype=float)
    if params.n_c == 0.0:
        return np.zeros_like(xi)[()]
    series = vector_potential_series(params)
    eta = params.omega * xi / params.c
    clipped = np.clip(eta, 0.0, 2.0 * math.pi * params.n_c)
    return np.where(eta <= 0.0, 0.0, series(clipped))[()]


def field_area(params: PulseParams) -> float:
    """Total electric field area ``S_E = int E dt`` in closed form."""
    n = params.n_c
    if n == 0.0:
        return 0.0
    if n == 1.0:
        return 0.0
    s = _sinpi(n)
    return (params.e_star / params.omega) * s * s / (1.0 - n * n)


def field_area_quadrature(params: PulseParams,
                          spec: QuadratureSpec | None = None) -> float:
    """S_E by adaptive quadrature of the field over its support (oracle path)."""
    if params.n_c == 0.0:
        return 0.0
    if spec is None:
        spec = QuadratureSpec(rel_tol=1e-13, abs_tol=1e-15)
    scale = params.e_star / params.omega

    def f(eta):
        return envelope(eta, params.n_c) * np.sin(eta)

    # integrate in carrier phase over whole half-cycles to limit cancellation
    edges = np.arange(0.0, 2.0 * math.pi * params.n_c, math.pi)
    edges = np.append(edges, 2.0 * math.pi * params.n_c)
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        val, _ = integrate(f, lo, hi, spec)
        total += val
    return scale * total


def sigma_E(params: PulseParams) -> float:
    """Dimensionless electric field area ``S_E / (2 c)``."""
    return field_area(params) / (2.0 * params.c)


def unipolarity(params: PulseParams,
                spec: QuadratureSpec | None = None) -> float:
    """Degree of unipolarity ``|int E dt| / int |E| dt`` in [0, 1]."""
    if params.n_c == 0.0 or params.e_star == 0.0:
        raise DegeneratePulse("pulse has no field content")
    if spec is None:
        spec = QuadratureSpec(rel_tol=1e-12, abs_tol=1e-14)

    def f(eta):
        return envelope(eta, params.n_c) * np.sin(eta)

    # |sin| has kinks at multiples of pi; panel the support there
    eta_max = 2.0 * math.pi * params.n_c
    edges = np.append(np.arange(0.0, eta_max, math.pi), eta_max)
    net = 0.0
    mod = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        val, _ = integrate(f, lo, hi, spec)
        net += val
        mod += abs(val)  # the field is one-signed between carrier zeros
    if mod == 0.0:
        raise DegeneratePulse("int |E| dt vanishes")
    return abs(net) / mod
