"""Shared numerical kernels.

Adaptive Gauss-Legendre panel quadrature, oscillation-aware panel placement,
fixed-order pairwise reductions and 4th-order finite-difference residual
evaluation.  All routines are pure functions; cached node tables are immutable
after construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import GridTooSmall, ToleranceNotMet

__all__ = [
    "QuadratureSpec",
    "Grid1D",
    "gauss_panels",
    "phase_bounded_edges",
    "integrate",
    "pairwise_sum",
    "fd4_derivative",
    "finite_difference_residual",
]


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and limits for adaptive quadrature."""

    rel_tol: float = 1e-12
    abs_tol: float = 1e-14
    max_panels: int = 4096
    #: maximum phase advance per panel [rad] for oscillatory integrands
    phase_rate_bound: float = math.pi / 4

    def __post_init__(self):
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.phase_rate_bound > math.pi / 2:
            raise ValueError("phase_rate_bound must not exceed pi/2")


@dataclass(frozen=True)
class Grid1D:
    """Quadrature nodes and weights on a 1D interval."""

    nodes: np.ndarray
    weights: np.ndarray
    kind: str = "GAUSS_PANELS"  # or "UNIFORM"

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)
        if nodes.ndim != 1 or nodes.shape != weights.shape:
            raise ValueError("nodes and weights must be matching 1D arrays")
        if np.any(np.diff(nodes) <= 0):
            raise ValueError("nodes must be strictly increasing")
        if np.any(weights <= 0):
            raise ValueError("weights must be positive")

    def __len__(self):
        return self.nodes.size


_LEGGAUSS_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _leggauss(n: int) -> tuple[np.ndarray, np.ndarray]:
    if n not in _LEGGAUSS_CACHE:
        _LEGGAUSS_CACHE[n] = np.polynomial.legendre.leggauss(n)
    return _LEGGAUSS_CACHE[n]


def gauss_panels(edges, nodes_per_panel: int = 12) -> Grid1D:
    """Gauss-Legendre grid on the panels defined by sorted ``edges``."""
    edges = np.asarray(edges, dtype=float)
    if edges.ndim != 1 or edges.size < 2:
        raise ValueError("need at least two panel edges")
    x, w = _leggauss(nodes_per_panel)
    lo = edges[:-1]
    half = 0.5 * np.diff(edges)
    mid = lo + half
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return Grid1D(nodes, weights, kind="GAUSS_PANELS")


def phase_bounded_edges(phase_rate, a: float, b: float, max_phase: float,
                        max_panels: int = 200_000) -> np.ndarray:
    """Panel edges on [a, b] such that each panel's estimated phase advance
    stays below ``max_phase``.

    ``phase_rate(x)`` returns |dPhi/dx| (vectorized).  The estimate uses the
    larger of the two endpoint rates of each candidate panel, refined by
    bisection, so mildly varying rates are handled conservatively.
    """
    if b <= a:
        raise ValueError("empty interval")
    edges = [a, b]
    i = 0
    while i < len(edges) - 1:
        lo, hi = edges[i], edges[i + 1]
        rate = float(np.max(phase_rate(np.array([lo, 0.5 * (lo + hi), hi]))))
        if rate * (hi - lo) > max_phase and len(edges) <= max_panels:
            edges.insert(i + 1, 0.5 * (lo + hi))
        else:
            i += 1
    if len(edges) > max_panels:
        raise ToleranceNotMet("phase-bounded paneling exceeded max_panels")
    return np.asarray(edges)


def integrate(f, a: float, b: float, spec: QuadratureSpec | None = None):
    """Adaptive Gauss-Legendre quadrature of ``f`` on [a, b].

    Returns ``(value, error_estimate)`` with
    ``|error_estimate| <= max(abs_tol, rel_tol * |value|)``.  ``f`` must accept
    a 1D array of abscissae.  Raises :class:`ToleranceNotMet` (carrying the
    best value found) if the panel budget is exhausted.
    """
    if spec is None:
        spec = QuadratureSpec()
    if b == a:
        return 0.0, 0.0
    sign = 1.0
    if b < a:
        a, b = b, a
        sign = -1.0

    x_lo, w_lo = _leggauss(10)
    x_hi, w_hi = _leggauss(21)

    def panel(lo, hi):
        half = 0.5 * (hi - lo)
        mid = 0.5 * (hi + lo)
        v_lo = half * np.sum(w_lo * f(mid + half * x_lo))
        v_hi = half * np.sum(w_hi * f(mid + half * x_hi))
        return v_hi, abs(v_hi - v_lo)

    # Worklist of (lo, hi, value, err); refine the worst panel until done.
    panels = [(a, b, *panel(a, b))]
    while True:
        total = pairwise_sum([p[2] for p in panels])
        err = sum(p[3] for p in panels)
        if err <= max(spec.abs_tol, spec.rel_tol * abs(total)):
            return sign * total, err
        if len(panels) >= spec.max_panels:
            raise ToleranceNotMet(
                "quadrature tolerance not met within panel budget",
                value=sign * total, error_estimate=err)
        k = max(range(len(panels)), key=lambda i: panels[i][3])
        lo, hi, _, _ = panels.pop(k)
        mid = 0.5 * (lo + hi)
        panels.append((lo, mid, *panel(lo, mid)))
        panels.append((mid, hi, *panel(mid, hi)))


def pairwise_sum(values):
    """Sum with a fixed balanced reduction tree.

    The summation order depends only on the length of the input, so results
    are bitwise identical regardless of how callers partition their work.
    """
    vals = list(values)
    if not vals:
        return 0.0
    while len(vals) > 1:
        nxt = [vals[i] + vals[i + 1] for i in range(0, len(vals) - 1, 2)]
        if len(vals) % 2:
            nxt.append(vals[-1])
        vals = nxt
    return vals[0]


_FD4 = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0


def fd4_derivative(arr: np.ndarray, step: float, axis: int = 0) -> np.ndarray:
    """4th-order central first derivative along ``axis``.

    Returns an array shortened by two nodes at each end of ``axis``.
    """
    if arr.shape[axis] < 5:
        raise GridTooSmall("need at least 5 nodes along the derivative axis")
    a = np.moveaxis(arr, axis, 0)
    n = a.shape[0]
    out = sum(c * a[k:n - 4 + k] for k, c in enumerate(_FD4) if c != 0.0)
    return np.moveaxis(out / step, 0, axis)


def finite_difference_residual(psi: np.ndarray, h_apply, dt: float, dz: float,
                               scale: float) -> float:
    """Relative residual ``||i d_t psi - H psi|| / ||scale * psi||``.

    ``psi`` has shape (Nt, Nz, 4) on a uniform (t, z) grid.  ``h_apply(psi)``
    returns H applied to the sample; where H involves d_z it may use
    :func:`fd4_derivative`, in which case it must return the full shape with
    the two edge columns unusable (they are discarded here along with the two
    edge rows in t).
    """
    if psi.shape[0] < 5 or psi.shape[1] < 5:
        raise GridTooSmall("residual evaluation needs >= 5 nodes per axis")
    dpsi_dt = fd4_derivative(psi, dt, axis=0)            # (Nt-4, Nz, 4)
    hpsi = h_apply(psi)[2:-2]                            # match t interior
    res = 1j * dpsi_dt[:, 2:-2] - hpsi[:, 2:-2]
    ref = scale * psi[2:-2, 2:-2]
    return float(np.linalg.norm(res) / np.linalg.norm(ref))
