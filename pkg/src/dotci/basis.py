"""Single-particle bases of displaced 2D harmonic oscillators.

Each carrier sits in an isotropic parabola. A lateral field along x keeps
the potential parabolic but shifts its minimum and lowers its depth, so the
eigenfunctions are ordinary Hermite functions about a displaced center.
Electrons shift toward +x and holes toward -x for a positive field.
"""

from dataclasses import dataclass, field as dc_field
from functools import lru_cache
import math

import numpy as np
from numpy.polynomial.hermite import hermgauss
from scipy.special import eval_hermite

from .units import HBAR2_OVER_M0, EFIELD_MEV_PER_NM

ELECTRON = "electron"
HOLE = "hole"

# Gauss-Hermite order used for 1D overlaps; exact for polynomial degree < 2*order
GH_ORDER = 64


@dataclass(frozen=True)
class ParticleParams:
    species: str
    hbar_omega: float  # meV
    mass_ratio: float  # m*/m0
    charge_sign: int = None

    def __post_init__(self):
        if self.species not in (ELECTRON, HOLE):
            raise ValueError(f"unknown species {self.species!r}")
        if self.charge_sign is None:
            object.__setattr__(self, "charge_sign", -1 if self.species == ELECTRON else +1)
        if not (self.hbar_omega > 0 and math.isfinite(self.hbar_omega)):
            raise ValueError(f"hbar_omega must be positive, got {self.hbar_omega}")
        if not (self.mass_ratio > 0 and math.isfinite(self.mass_ratio)):
            raise ValueError(f"mass_ratio must be positive, got {self.mass_ratio}")
        if self.charge_sign not in (-1, 1):
            raise ValueError(f"charge_sign must be -1 or +1, got {self.charge_sign}")

    @property
    def length(self):
        """Oscillator length sqrt(hbar / m omega) in nm."""
        return math.sqrt(HBAR2_OVER_M0 / (self.mass_ratio * self.hbar_omega))

    @property
    def spring(self):
        """m omega^2 in meV/nm^2."""
        return self.hbar_omega**2 * self.mass_ratio / HBAR2_OVER_M0


def electron_params(hbar_omega=12.0, mass_ratio=0.055):
    return ParticleParams(ELECTRON, hbar_omega, mass_ratio)


def hole_params(hbar_omega=6.0, mass_ratio=0.11):
    return ParticleParams(HOLE, hbar_omega, mass_ratio)


@dataclass(frozen=True, order=True)
class Orbital:
    """Spin-orbital (nx, ny, spin). Sorting follows (shell, nx, spin)."""

    sort_key: tuple = dc_field(init=False, repr=False, compare=True)
    species: str = dc_field(compare=False)
    nx: int = dc_field(compare=False)
    ny: int = dc_field(compare=False)
    spin: float = dc_field(compare=False)

    def __post_init__(self):
        if self.nx < 0 or self.ny < 0:
            raise ValueError("oscillator quantum numbers must be non-negative")
        if self.spin not in (-0.5, 0.5):
            raise ValueError(f"spin must be +-1/2, got {self.spin}")
        object.__setattr__(self, "sort_key", (self.species, self.nx + self.ny, self.nx, self.spin))

    @property
    def shell(self):
        return self.nx + self.ny

    @property
    def spatial(self):
        return (self.nx, self.ny)

    @property
    def name(self):
        shell = "spdfgh"[self.shell] if self.shell < 6 else f"N{self.shell}"
        arrow = "+" if self.spin > 0 else "-"
        return f"{shell}({self.nx},{self.ny}){arrow}"


def spatial_states(n_shells):
    """(nx, ny) pairs ordered by shell then nx."""
    return [(nx, n - nx) for n in range(n_shells) for nx in range(n + 1)]


@dataclass(frozen=True)
class BasisSet:
    params: ParticleParams
    n_shells: int
    field: float  # kV/cm
    center_x: float  # nm
    length: float  # nm
    orbitals: tuple  # spin-orbitals, sorted

    @property
    def species(self):
        return self.params.species

    @property
    def spatial(self):
        """Spatial orbitals (nx, ny) in basis order."""
        return spatial_states(self.n_shells)

    @property
    def n_spatial(self):
        return len(self.spatial)

    def __len__(self):
        return len(self.orbitals)

    def index(self, orbital):
        try:
            return self.orbitals.index(orbital)
        except ValueError:
            raise ValueError(f"{orbital} is not in this {self.species} basis") from None

    def spatial_index(self, i):
        """Spatial orbital index of spin-orbital i."""
        return i // 2

    def spin_of(self, i):
        return self.orbitals[i].spin

    def energies(self):
        """Spin-orbital energies in basis order, meV."""
        return np.array([orbital_energy(self, o) for o in self.orbitals])


def displacement(params, field):
    """Center shift of the parabola minimum in nm for a field in kV/cm."""
    if not math.isfinite(field):
        raise ValueError(f"field must be finite, got {field}")
    return -params.charge_sign * EFIELD_MEV_PER_NM * field / params.spring


def stark_energy(params, field):
    """Depth shift (eF)^2 / (2 m omega^2) of the displaced parabola, meV (>= 0)."""
    ef = EFIELD_MEV_PER_NM * field
    return ef * ef / (2.0 * params.spring)


def build_basis(params, n_shells=3, field=0.0):
    if int(n_shells) != n_shells or n_shells < 1:
        raise ValueError(f"n_shells must be a positive integer, got {n_shells}")
    n_shells = int(n_shells)
    orbitals = tuple(
        Orbital(species=params.species, nx=nx, ny=ny, spin=s)
        for nx, ny in spatial_states(n_shells)
        for s in (-0.5, 0.5)
    )
    assert list(orbitals) == sorted(orbitals)
    return BasisSet(
        params=params,
        n_shells=n_shells,
        field=float(field),
        center_x=displacement(params, field),
        length=params.length,
        orbitals=orbitals,
    )


def orbital_energy(basis, orbital, field=None):
    if field is not None and field != basis.field:
        raise ValueError("orbital_energy field differs from the basis field")
    if orbital not in basis.orbitals:
        raise ValueError(f"{orbital} is not in this {basis.species} basis")
    p = basis.params
    return p.hbar_omega * (orbital.shell + 1) - stark_energy(p, basis.field)


def hermite_function(n, x, length=1.0, center=0.0):
    """Normalized 1D oscillator eigenfunction phi_n evaluated at x."""
    xi = (np.asarray(x, dtype=float) - center) / length
    norm = 1.0 / math.sqrt(2.0**n * math.factorial(n) * math.sqrt(math.pi) * length)
    return norm * eval_hermite(n, xi) * np.exp(-0.5 * xi * xi)


@lru_cache(maxsize=None)
def _gh(order):
    return hermgauss(order)


def overlap_1d(n1, l1, x1, n2, l2, x2):
    """Overlap of two real 1D oscillator eigenfunctions with own widths/centers."""
    if not (l1 > 0 and l2 > 0):
        raise ValueError("oscillator lengths must be positive")
    # product of the two Gaussians is exp(-a (x - mu)^2) times a constant
    a = 0.5 * (1.0 / l1**2 + 1.0 / l2**2)
    mu = 0.5 * (x1 / l1**2 + x2 / l2**2) / a
    pref = math.exp(-((x1 - x2) ** 2) / (2.0 * (l1**2 + l2**2)))
    t, w = _gh(GH_ORDER)
    x = mu + t / math.sqrt(a)
    p1 = eval_hermite(n1, (x - x1) / l1) / math.sqrt(2.0**n1 * math.factorial(n1) * math.sqrt(math.pi) * l1)
    p2 = eval_hermite(n2, (x - x2) / l2) / math.sqrt(2.0**n2 * math.factorial(n2) * math.sqrt(math.pi) * l2)
    return float(pref * np.dot(w, p1 * p2) / math.sqrt(a))


def _check_same_field(basis_e, basis_h):
    if basis_e.field != basis_h.field:
        raise ValueError(
            f"bases built at different fields ({basis_e.field} vs {basis_h.field} kV/cm)"
        )


def overlap_eh(e_orb, h_orb, basis_e, basis_h):
    """Envelope overlap between an electron and a hole orbital (spins ignored)."""
    _check_same_field(basis_e, basis_h)
    le, lh = basis_e.length, basis_h.length
    ox = overlap_1d(e_orb.nx, le, basis_e.center_x, h_orb.nx, lh, basis_h.center_x)
    oy = overlap_1d(e_orb.ny, le, 0.0, h_orb.ny, lh, 0.0)
    return ox * oy


def overlap_matrix(basis_e, basis_h):
    """alpha[i, j] over spatial orbitals: electron i, hole j."""
    _check_same_field(basis_e, basis_h)
    se, sh = basis_e.spatial, basis_h.spatial
    le, lh = basis_e.length, basis_h.length
    nmax = max(basis_e.n_shells, basis_h.n_shells)
    ox = np.array([[overlap_1d(a, le, basis_e.center_x, b, lh, basis_h.center_x)
                    for b in range(nmax)] for a in range(nmax)])
    oy = np.array([[overlap_1d(a, le, 0.0, b, lh, 0.0) for b in range(nmax)] for a in range(nmax)])
    alpha = np.empty((len(se), len(sh)))
    for i, (ex, ey) in enumerate(se):
        for j, (hx, hy) in enumerate(sh):
            alpha[i, j] = ox[ex, hx] * oy[ey, hy]
    return alpha


def self_overlap_matrix(basis):
    """Overlap matrix of a basis with itself; the identity for a valid basis."""
    l, c = basis.length, basis.center_x
    st = basis.spatial
    m = np.empty((len(st), len(st)))
    for i, (ax, ay) in enumerate(st):
        for j, (bx, by) in enumerate(st):
            m[i, j] = overlap_1d(ax, l, c, bx, l, c) * overlap_1d(ay, l, 0.0, by, l, 0.0)
    return m
