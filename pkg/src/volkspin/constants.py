"""Physical constants and global sign conventions (atomic units)."""

# Speed of light in atomic units, 1/alpha.  Overridable per PulseParams.
C_AU = 137.035999

# Electron charge and mass in atomic units.
ELECTRON_CHARGE = -1.0
ELECTRON_MASS = 1.0

# Relative sign between the vector potential and the field area:
# A0 = A_SIGN * c * S_E.  We adopt E = -(1/c) dA/dt, i.e. A(xi) = -int_0^xi E,
# which makes the classical kinetic momentum u_x = A(xi)/c hold with e = -1.
A_SIGN = -1.0
