"""Golden-rule emission lines from CI eigenstates.

The interband polarization operator removes one bright pair,

    P_s = sum_ij alpha_ij c_{i,s} h_{j,-s},

and the two linear channels are P_H = (P_up + P_down)/sqrt(2) and
P_V = (P_up - P_down)/sqrt(2). The symmetric bright exciton (upper member
of the exchange doublet) couples to H and the antisymmetric one to V. Line
strengths are |<f|P_H|i>|^2 + |<f|P_V|i>|^2.
"""

from dataclasses import dataclass, replace
import math

import numpy as np

from .basis import overlap_matrix
from .manybody import Sector, exciton_doublet

LINE_FLOOR = 1e-12
POLARIZATION_PURITY = 1e-6

SS = ((0, 0), (0, 0))
S_PX = ((0, 0), (1, 0))
S_PY = ((0, 0), (0, 1))


@dataclass(frozen=True)
class EmissionLine:
    photon_energy: float  # meV
    strength: float
    strength_h: float
    strength_v: float
    polarization: str  # "H", "V" or "unresolved"
    initial_sector: tuple
    final_sector: tuple
    initial_index: int
    final_index: int
    label: str = "other"


def polarization_matrix(initial, final=None):
    """P_H and P_V as dense (final configs x initial configs) matrices.

    `initial` is a Sector; `final` defaults to the sector with one pair less.
    """
    if final is None:
        final = Sector(initial.n_e - 1, initial.n_h - 1, initial.basis_e, initial.basis_h)
    if (final.n_e, final.n_h) != (initial.n_e - 1, initial.n_h - 1):
        raise ValueError(f"sectors {initial.label} -> {final.label} do not differ by one pair")
    be, bh = initial.basis_e, initial.basis_h
    alpha = overlap_matrix(be, bh)
    sign = -1.0 if initial.n_e % 2 else 1.0  # h_j passes the N_e electron operators
    ae = [initial.e.annihilator(k, final.e) for k in range(len(be))]
    ah = [initial.h.annihilator(k, final.h) for k in range(len(bh))]
    channels = {}
    for spin in (0.5, -0.5):
        p = np.zeros((len(final), len(initial)))
        for i, oe in enumerate(be.orbitals):
            if oe.spin != spin:
                continue
            for j, oh in enumerate(bh.orbitals):
                if oh.spin != -spin:
                    continue
                a = alpha[i // 2, j // 2]
                if a != 0.0:
                    p += a * np.kron(ae[i], ah[j])
        channels[spin] = sign * p
    up, down = channels[0.5], channels[-0.5]
    r = 1.0 / math.sqrt(2.0)
    return {"H": r * (up + down), "V": r * (up - down)}


def _polarization(sh, sv):
    tot = sh + sv
    if tot > 0 and sv <= POLARIZATION_PURITY * tot:
        return "H"
    if tot > 0 and sh <= POLARIZATION_PURITY * tot:
        return "V"
    return "unresolved"


def emission_spectrum(initial, final_solution, gap_offset=0.0, floor=LINE_FLOOR, pol=None):
    """Lines from one initial eigenstate to every state of `final_solution`.

    Lines weaker than `floor` times the strongest, or with non-positive
    photon energy, are dropped. `pol` may carry precomputed polarization
    matrices for the sector pair.
    """
    fs = final_solution.sector
    ins = initial.sector
    if (fs.n_e, fs.n_h) != (ins.n_e - 1, ins.n_h - 1):
        raise ValueError(f"sectors {ins.label} -> {fs.label} do not differ by one pair")
    if pol is None:
        pol = polarization_matrix(ins, fs)
    amp_h = final_solution.vectors.T @ (pol["H"] @ initial.vector)
    amp_v = final_solution.vectors.T @ (pol["V"] @ initial.vector)
    sh, sv = amp_h**2, amp_v**2
    strength = sh + sv
    smax = strength.max() if len(strength) else 0.0
    lines = []
    for f in range(len(final_solution)):
        photon = initial.energy - final_solution.energies[f]
        if photon <= 0 or strength[f] <= floor * smax or strength[f] == 0.0:
            continue
        lines.append(EmissionLine(
            photon_energy=float(photon + gap_offset),
            strength=float(strength[f]),
            strength_h=float(sh[f]),
            strength_v=float(sv[f]),
            polarization=_polarization(sh[f], sv[f]),
            initial_sector=ins.label,
            final_sector=fs.label,
            initial_index=initial.index,
            final_index=f,
        ))
    return lines


def sum_rule(initial, final_solution, pol=None):
    """(sum_f |<f|P|i>|^2, <i|P+ P|i>) summed over H and V."""
    if pol is None:
        pol = polarization_matrix(initial.sector, final_solution.sector)
    lhs = rhs = 0.0
    for p in pol.values():
        pv = p @ initial.vector
        lhs += float(np.sum((final_solution.vectors.T @ pv) ** 2))
        rhs += float(pv @ pv)
    return lhs, rhs


def lorentzian(x, center, gamma):
    """Unit-area Lorentzian with full width at half maximum gamma."""
    hw = 0.5 * gamma
    return hw / math.pi / ((x - center) ** 2 + hw * hw)


def broadened_spectrum(lines, gamma, grid):
    """Sum of unit-area Lorentzians (FWHM gamma in micro-eV) on an energy grid in meV."""
    if gamma <= 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise ValueError("empty energy grid")
    g = gamma / 1000.0
    out = np.zeros_like(grid)
    for ln in lines:
        out += ln.strength * lorentzian(grid, ln.photon_energy, g)
    return out


def character(solution, index, pair):
    """Weight of a (1, 1) state on configurations with given (electron, hole) spatial orbitals."""
    sec = solution.sector
    if sec.label != (1, 1):
        raise ValueError("character is defined for single-exciton states")
    se, sh = sec.basis_e.spatial, sec.basis_h.spatial
    ie = se.index(pair[0])
    ih = sh.index(pair[1])
    v = solution.vectors[:, index].reshape(len(sec.e), len(sec.h))
    e_rows = [a for a, s in enumerate(sec.e.states) if (s.bit_length() - 1) // 2 == ie]
    h_rows = [b for b, s in enumerate(sec.h.states) if (s.bit_length() - 1) // 2 == ih]
    return float(np.sum(v[np.ix_(e_rows, h_rows)] ** 2))


def exciton_label(x_solution, index):
    """Label of a bright single-exciton state: X1, X2, s-p_x, s-p_y or other."""
    bright = np.flatnonzero(x_solution.sz_total == 0)
    if len(bright) >= 2 and index == bright[0]:
        return "X1"
    if len(bright) >= 2 and index == bright[1]:
        return "X2"
    if character(x_solution, index, S_PX) > 0.5:
        return "s-p_x"
    if character(x_solution, index, S_PY) > 0.5:
        return "s-p_y"
    return "other"


def classify_lines(lines, x_solution):
    """Attach labels using the identity and character of the exciton involved."""
    bright = np.flatnonzero(x_solution.sz_total == 0)
    x1, x2 = (bright[0], bright[1]) if len(bright) >= 2 else (None, None)
    out = []
    for ln in lines:
        if ln.initial_sector == (1, 1) and ln.final_sector == (0, 0):
            label = exciton_label(x_solution, ln.initial_index)
        elif ln.initial_sector == (2, 2) and ln.final_sector == (1, 1):
            if ln.final_index == x1:
                label = "XX_A1"
            elif ln.final_index == x2:
                label = "XX_B1"
            else:
                label = "other"
        else:
            label = "other"
        out.append(replace(ln, label=label))
    return out


def exciton_lines(x_solution, vacuum_solution, gap_offset=0.0, max_states=None):
    """Recombination lines of the bright excitons (ground doublet and excited states)."""
    bright = np.flatnonzero(x_solution.sz_total == 0)
    if max_states is not None:
        bright = bright[:max_states]
    pol = polarization_matrix(x_solution.sector, vacuum_solution.sector)
    lines = []
    for i in bright:
        lines += emission_spectrum(x_solution.state(i), vacuum_solution, gap_offset, floor=0.0, pol=pol)
    # one floor across all excitons: a parity-forbidden line is its own maximum
    smax = max((ln.strength for ln in lines), default=0.0)
    lines = [ln for ln in lines if ln.strength > LINE_FLOOR * smax]
    return classify_lines(lines, x_solution)


def biexciton_lines(xx_solution, x_solution, gap_offset=0.0):
    """Lines of the biexciton ground state into all single-exciton states."""
    lines = emission_spectrum(xx_solution.state(0), x_solution, gap_offset)
    return classify_lines(lines, x_solution)
