"""Relativistic electron spin dynamics in finite unipolar laser pulses.

Exact Dirac wave-packet propagation in the Volkov basis, four competing
relativistic spin operators (Pauli, Foldy-Wouthuysen, Frenkel, Pryce) plus
the Lorentz-boost rest-frame route, and classical Larmor / T-BMT
cross-checks.  All quantities are in atomic units.
"""

from .classical import (AnalyticModel, AnalyticSpinInput, ClassicalState,
                        MonochromaticWave, SpinModel, Trajectory,
                        analytic_kinematics, analytic_spin_change,
                        delta_pz_estimate, initial_state, integrate_motion,
                        integrate_spin, theta0_of_pz)
from .constants import C_AU
from .errors import (BoxTooSmall, ConfigError, DegeneratePulse,
                     FieldNotConstant, GridTooCoarse, GridTooSmall,
                     OverlapViolation, RepresentationMismatch, StepFailure,
                     ToleranceNotMet, VolkspinError, ZeroMomentum)
from .pipeline import QuantumRun, run_quantum
from .pulse import (FieldSample, PulseParams, electric_field, field_area,
                    field_area_quadrature, sigma_E, unipolarity,
                    vector_potential)
from .spinops import (SpinOperatorKind, SpinReport, helicity_mean, mean_spin,
                      rest_frame_spin, spin_matrix)
from .verify import CheckResult, run_checks
from .volkov import (CoefficientTable, PacketSpec, Representation,
                     WaveFunctionSample, expansion_coefficients,
                     observables_kinematic, propagate, volkov_function)

__version__ = "0.1.0"

__all__ = [
    "__version__", "C_AU",
    # pulse
    "PulseParams", "FieldSample", "electric_field", "vector_potential",
    "field_area", "field_area_quadrature", "sigma_E", "unipolarity",
    # classical
    "ClassicalState", "AnalyticSpinInput", "AnalyticModel", "SpinModel",
    "Trajectory", "MonochromaticWave", "integrate_motion", "integrate_spin",
    "analytic_spin_change", "analytic_kinematics", "delta_pz_estimate",
    "initial_state", "theta0_of_pz",
    # quantum
    "PacketSpec", "CoefficientTable", "WaveFunctionSample", "Representation",
    "expansion_coefficients", "propagate", "observables_kinematic",
    "volkov_function", "QuantumRun", "run_quantum",
    # spin
    "SpinOperatorKind", "SpinReport", "spin_matrix", "mean_spin",
    "rest_frame_spin", "helicity_mean",
    # verification
    "CheckResult", "run_checks",
    # errors
    "VolkspinError", "DegeneratePulse", "StepFailure", "OverlapViolation",
    "BoxTooSmall", "GridTooCoarse", "GridTooSmall", "RepresentationMismatch",
    "FieldNotConstant", "ZeroMomentum", "ToleranceNotMet", "ConfigError",
]
