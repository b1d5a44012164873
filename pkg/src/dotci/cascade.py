"""Biexciton-exciton cascade energies and their pairwise degeneracies.

Path A runs XX -> X1 -> 0 and path B runs XX -> X2 -> 0. When the biexciton
binding energy vanishes, E_XX = E_X1 + E_X2, so the first photon of one
path matches the second photon of the other (A1 = B2, A2 = B1) whatever the
exchange splitting.
"""

from dataclasses import dataclass

from .manybody import exciton_doublet
from .units import UEV_PER_MEV


@dataclass(frozen=True)
class CascadeTransitions:
    A1: float
    A2: float
    B1: float
    B2: float
    E_XX: float
    # X1 is the antisymmetric (V) state, X2 the symmetric (H) one
    polarization_A: str = "V"
    polarization_B: str = "H"

    @property
    def AES(self):
        """X2 - X1 in micro-eV."""
        return (self.B2 - self.A2) * UEV_PER_MEV


def cascade_transitions(x_solution, xx_solution):
    if x_solution is None or xx_solution is None:
        raise ValueError("cascade needs both the (1, 1) and (2, 2) solutions")
    if xx_solution.label != (2, 2):
        raise ValueError(f"biexciton solution has sector {xx_solution.label}")
    e1, e2 = exciton_doublet(x_solution)
    exx = float(xx_solution.energies[0])
    return from_energies(e1, e2, exx)


def from_energies(e_x1, e_x2, e_xx):
    return CascadeTransitions(A1=e_xx - e_x1, A2=e_x1, B1=e_xx - e_x2, B2=e_x2, E_XX=e_xx)


def degeneracy_report(t):
    """Pair detunings in micro-eV, both signed as E_XX - E_X1 - E_X2 (minus the binding).

    delta_A1B2 = A1 - B2 and delta_A2B1 = B1 - A2.
    """
    return {
        "delta_A1B2": (t.A1 - t.B2) * UEV_PER_MEV,
        "delta_A2B1": (t.B1 - t.A2) * UEV_PER_MEV,
        "AES": t.AES,
    }


def spectral_overlap(delta, gamma):
    """Normalized overlap of two Lorentzians of FWHM gamma detuned by delta."""
    if not gamma > 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    return 1.0 / (1.0 + (delta / gamma) ** 2)


def cascade_report(records, gammas=(50.0,)):
    """Rows of cascade energies, detunings and overlaps for sweep records."""
    rows = []
    for r in records:
        t = from_energies(r.E_X1, r.E_X2, r.E_XX_total)
        d = degeneracy_report(t)
        row = {
            "field_kV_cm": r.field,
            "A1_meV": t.A1,
            "A2_meV": t.A2,
            "B1_meV": t.B1,
            "B2_meV": t.B2,
            "delta_A1B2_ueV": d["delta_A1B2"],
            "delta_A2B1_ueV": d["delta_A2B1"],
            "AES_ueV": d["AES"],
        }
        for g in gammas:
            row[f"overlap_A1B2_g{g:g}"] = spectral_overlap(d["delta_A1B2"], g)
            row[f"overlap_A2B1_g{g:g}"] = spectral_overlap(d["delta_A2B1"], g)
        rows.append(row)
    return rows
