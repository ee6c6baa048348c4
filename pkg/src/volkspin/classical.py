"""Classical relativistic electron dynamics and spin precession.

Equations of motion in the pulse (e = -1, m = 1 a.u.) are integrated jointly
with either the nonrelativistic Larmor precession or the relativistic T-BMT
precession, using an adaptive embedded Runge-Kutta method (DOP853).  The
module also provides the exact closed-form solutions for a monochromatic
plane wave, including the D-factor generalization to nonzero initial
longitudinal momentum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np
from scipy.integrate import solve_ivp

from .constants import C_AU, ELECTRON_CHARGE
from .errors import StepFailure
from .pulse import PulseParams, electric_field

__all__ = [
    "ClassicalState",
    "AnalyticSpinInput",
    "SpinModel",
    "AnalyticModel",
    "Trajectory",
    "MonochromaticWave",
    "integrate_motion",
    "integrate_spin",
    "analytic_spin_change",
    "theta0_of_pz",
    "analytic_kinematics",
    "delta_pz_estimate",
    "initial_state",
]


class SpinModel(str, Enum):
    LARMOR = "LARMOR"
    TBMT = "TBMT"


class AnalyticModel(str, Enum):
    NR = "NR"
    NR_APPROX = "NR_APPROX"
    REL = "REL"


@dataclass(frozen=True)
class ClassicalState:
    """Phase-space point: position, proper velocity u = gamma v, spin."""

    t: float
    z: float
    x: float
    u: np.ndarray  # (ux, uy, uz)
    s: np.ndarray  # (sx, sy, sz), |s| = 1/2
    c: float = C_AU

    def __post_init__(self):
        object.__setattr__(self, "u", np.asarray(self.u, dtype=float))
        object.__setattr__(self, "s", np.asarray(self.s, dtype=float))

    @property
    def gamma(self) -> float:
        return math.sqrt(1.0 + float(self.u @ self.u) / self.c**2)


@dataclass(frozen=True)
class AnalyticSpinInput:
    """Arguments of the closed-form spin-change expressions."""

    sigma: float
    theta0: float = 0.0
    p_z: float = 0.0
    model: AnalyticModel = AnalyticModel.REL
    c: float = C_AU


@dataclass(frozen=True)
class Trajectory:
    """Sampled solution of the equations of motion (and optionally spin)."""

    t: np.ndarray
    z: np.ndarray
    x: np.ndarray
    u: np.ndarray          # shape (n, 3)
    s: np.ndarray | None   # shape (n, 3) or None
    spin_model: SpinModel | None
    initial: ClassicalState
    sol: object = None     # dense-output interpolant from the solver

    @property
    def final(self) -> ClassicalState:
        s = self.s[-1] if self.s is not None else self.initial.s
        return ClassicalState(t=float(self.t[-1]), z=float(self.z[-1]),
                              x=float(self.x[-1]), u=self.u[-1], s=s,
                              c=self.initial.c)


class MonochromaticWave:
    """Infinite plane wave E_x = e_star * cos(omega xi / c + phi0)."""

    def __init__(self, e_star: float, omega: float, phi0: float = 0.0,
                 c: float = C_AU):
        self.e_star = e_star
        self.omega = omega
        self.phi0 = phi0
        self.c = c

    def electric(self, xi):
        return self.e_star * np.cos(self.omega * np.asarray(xi) / self.c
                                    + self.phi0)


class _PulseField:
    def __init__(self, params: PulseParams):
        self.params = params
        self.c = params.c
        self.omega = params.omega

    def electric(self, xi):
        return electric_field(xi, self.params)


def _as_field(pulse):
    return _PulseField(pulse) if isinstance(pulse, PulseParams) else pulse


def initial_state(p_z: float, t: float = 0.0, z: float = 0.0,
                  theta0: float | None = None, c: float = C_AU) -> ClassicalState:
    """State at rest-frame spin angle ``theta0`` (default: the FW angle of
    the matching quantum packet, arctan(p_z / c))."""
    if theta0 is None:
        theta0 = theta0_of_pz(p_z, c)
    s = 0.5 * np.array([math.sin(theta0), 0.0, math.cos(theta0)])
    return ClassicalState(t=t, z=z, x=0.0, u=np.array([0.0, 0.0, p_z]), s=s,
                          c=c)


def _rhs(field, spin_model: SpinModel | None, c: float):
    e = ELECTRON_CHARGE

    def rhs(t, y):
        z, x, ux, uz, sx, sy, sz = y
        gamma = math.sqrt(1.0 + (ux * ux + uz * uz) / (c * c))
        vx, vz = ux / gamma, uz / gamma
        ef = float(field.electric(c * t - z))
        dux = e * ef * (1.0 - vz / c)
        duz = e * ef * vx / c
        if spin_model is None:
            osx = osz = 0.0
        else:
            # precession frequency about e_y; B_y = E_x for the plane wave
            if spin_model is SpinModel.LARMOR:
                omega_s = (ef / c) * (1.0 - vz / c)
            else:
                omega_s = (ef / c) * (1.0 / gamma - vz / (c * (gamma + 1.0)))
            osx = omega_s * sz
            osz = -omega_s * sx
        return (vz, vx, dux, duz, osx, 0.0, osz)

    return rhs


def _auto_t_end(state: ClassicalState, params: PulseParams,
                margin: float) -> float:
    # crude upper bound on the exit time assuming v_z < 0.99 c
    path = params.l + params.xi_max + margin + abs(state.z)
    return state.t + path / (params.c * 0.01)


def integrate_motion(initial: ClassicalState, pulse, t_end: float | None = None,
                     rtol: float = 1e-10, atol: float = 1e-12,
                     spin_model: SpinModel | None = None,
                     exit_margin: float = 1.0,
                     max_step: float | None = None) -> Trajectory:
    """Integrate the relativistic equations of motion through the pulse.

    With ``spin_model`` set, the spin precession is co-integrated on the same
    adaptive steps.  If ``t_end`` is None and ``pulse`` is a
    :class:`PulseParams`, integration stops once the particle has left the
    pulse support (light-front coordinate beyond ``xi_max + exit_margin``).
    ``max_step`` defaults to a fraction of the carrier period so a short
    pulse cannot be stepped over during a long field-free run-up.
    """
    field = _as_field(pulse)
    c = getattr(field, "c", initial.c)
    if max_step is None:
        omega = getattr(field, "omega", None)
        max_step = math.pi / (8.0 * omega) if omega else np.inf
    y0 = [initial.z, initial.x, initial.u[0], initial.u[2],
          initial.s[0], initial.s[1], initial.s[2]]
    events = None
    if t_end is None:
        if not isinstance(pulse, PulseParams):
            raise ValueError("t_end is required for non-pulse fields")
        xi_exit = pulse.xi_max + exit_margin

        def exited(t, y):
            return (c * t - y[0]) - xi_exit
        exited.terminal = True
        exited.direction = 1.0
        events = [exited]
        t_end = _auto_t_end(initial, pulse, exit_margin)

    res = solve_ivp(_rhs(field, spin_model, c), (initial.t, t_end), y0,
                    method="DOP853", rtol=rtol, atol=atol, dense_output=True,
                    events=events, max_step=max_step)
    if not res.success:
        raise StepFailure(res.message)
    y = res.y
    s = y[4:7].T if spin_model is not None else None
    return Trajectory(t=res.t, z=y[0], x=y[1],
                      u=np.column_stack([y[2], np.zeros_like(y[2]), y[3]]),
                      s=s, spin_model=spin_model, initial=initial, sol=res.sol)


def integrate_spin(trajectory: Trajectory, pulse, model: SpinModel,
                   rtol: float = 1e-10, atol: float = 1e-12) -> Trajectory:
    """Re-integrate the trajectory's initial-value problem with spin
    precession co-integrated; returns the combined trajectory."""
    return integrate_motion(trajectory.initial, pulse,
                            t_end=float(trajectory.t[-1]), rtol=rtol,
                            atol=atol, spin_model=model)


def theta0_of_pz(p_z: float, c: float = C_AU) -> float:
    """Initial spin precession angle of the s=+1 packet, measured from +z."""
    return math.atan2(p_z, c)


def analytic_spin_change(inp: AnalyticSpinInput) -> np.ndarray:
    """Closed-form total spin change (ds_x, ds_y, ds_z) for a plane wave.

    NR uses the precession angle ``sigma`` directly, REL replaces it with
    ``arctan(sigma / D)`` where the D-factor accounts for the initial
    longitudinal momentum; NR_APPROX keeps terms through sigma^2.
    """
    sig, th0 = inp.sigma, inp.theta0
    if inp.model is AnalyticModel.NR:
        dsx = math.sin(sig) * math.cos(th0 + sig)
        dsz = -math.sin(sig) * math.sin(th0 + sig)
    elif inp.model is AnalyticModel.NR_APPROX:
        dsx = sig * math.cos(th0) - sig * sig * math.sin(th0)
        dsz = -sig * math.sin(th0) - sig * sig * math.cos(th0)
    elif inp.model is AnalyticModel.REL:
        pz_c = inp.p_z / inp.c
        pi_z = math.sqrt(1.0 + pz_c * pz_c)
        d = 0.5 * (1.0 + pi_z - pz_c)
        ang = math.atan(sig / d)
        dsx = math.sin(ang) * math.cos(th0 + ang)
        dsz = -math.sin(ang) * math.sin(th0 + ang)
    else:
        raise ValueError(f"unknown model {inp.model}")
    return np.array([dsx, 0.0, dsz])


def analytic_kinematics(tau, p_z: float, e_star: float, omega: float,
                        phi0: float = 0.0, c: float = C_AU):
    """Exact proper velocity and Lorentz factor in a monochromatic wave.

    ``tau = t - z/c`` is the particle's light-front time; the wave is
    ``E_x = e_star cos(omega tau + phi0)`` along its trajectory.  Returns
    ``(u_x, u_z, gamma)``.
    """
    tau = np.asarray(tau, dtype=float)
    u0 = ELECTRON_CHARGE * e_star / omega
    ux = u0 * (np.sin(omega * tau + phi0) - math.sin(phi0))
    pz_c = p_z / c
    pi_z = math.sqrt(1.0 + pz_c * pz_c)
    uz = p_z + ux * ux / (2.0 * c * (pi_z - pz_c))
    gamma = pi_z - pz_c + uz / c
    return ux[()], uz[()], gamma[()]


def delta_pz_estimate(p_z: float, s_e: float, c: float = C_AU) -> float:
    """Total longitudinal momentum change acquired from a pulse of area s_e."""
    return c / (math.sqrt(c * c + p_z * p_z) - p_z) * s_e * s_e / (2.0 * c)
