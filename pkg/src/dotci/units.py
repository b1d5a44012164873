"""Unit system: energies in meV, lengths in nm, fields in kV/cm."""

import scipy.constants as _c

_MEV = 1e-3 * _c.e

# hbar^2 / m0 in meV nm^2
HBAR2_OVER_M0 = _c.hbar**2 / _c.m_e / _MEV / 1e-18

# e^2 / (4 pi eps0) in meV nm
COULOMB_CONSTANT = _c.e**2 / (4 * _c.pi * _c.epsilon_0) / _MEV / 1e-9

# e*F in meV/nm for F = 1 kV/cm
EFIELD_MEV_PER_NM = 0.1

UEV_PER_MEV = 1000.0
