"""Physical constants and fixed atomic data for the Rb-87 toolkit.

CODATA values come from :mod:`scipy.constants`; the atomic numbers are the
standard Rb-87 line data used throughout (D-line wavelengths, excited-state
lifetimes, hyperfine splittings, saturation intensities).
"""

import math

from scipy import constants as _const

PI = math.pi
TWO_PI = 2.0 * math.pi

C = _const.c
HBAR = _const.hbar
H = _const.h
KB = _const.k
EPS0 = _const.epsilon_0
MU_B = _const.value("Bohr magneton")
ATOMIC_MASS = _const.atomic_mass

# Rb-87 bulk properties
RB87_MASS = 86.9092 * ATOMIC_MASS
RB87_TWO_I = 3  # nuclear spin I = 3/2, stored doubled

# D-line data
RB87_LAMBDA_D1 = 794.979e-9
RB87_LAMBDA_D2 = 780.246e-9
RB87_TAU_5P12 = 27.70e-9
RB87_TAU_5P32 = 26.24e-9
RB87_GAMMA_D1 = TWO_PI * 5.746e6
RB87_GAMMA_D2 = TWO_PI * 6.065e6

# Hyperfine structure
RB87_GROUND_HFS = TWO_PI * 6.83468e9        # F=1 <-> F=2 splitting of 5S1/2
RB87_5P32_F2_F3_SPLITTING = TWO_PI * 266.65e6  # F'=2 <-> F'=3 of 5P3/2

# Saturation intensities (W/m^2) for an isotropically polarized pump field,
# per hyperfine transition of the D2 line.  1 mW/cm^2 = 10 W/m^2.
RB87_ISAT_F1_F2 = 60.1    # F=1 -> F'=2
RB87_ISAT_F2_F2 = 100.1   # F=2 -> F'=2
RB87_ISAT_F2_F3 = 35.8    # F=2 -> F'=3

# Lande factor of the electronic ground state (used for vector light shifts)
RB87_GJ_GROUND = 2.0

MW_PER_CM2 = 10.0  # W/m^2 per mW/cm^2


def intensity_from_mw_cm2(value: float) -> float:
    """Convert an intensity in mW/cm^2 to W/m^2."""
    return value * MW_PER_CM2


def angular_frequency(wavelength: float) -> float:
    """Angular frequency (rad/s) of light with the given vacuum wavelength (m)."""
    if wavelength <= 0:
        raise ValueError("wavelength must be positive")
    return TWO_PI * C / wavelength
