"""Configuration-interaction model of excitons and biexcitons in a quantum dot under a lateral field."""

from .basis import (
    BasisSet, Orbital, ParticleParams, build_basis, displacement, electron_params,
    hole_params, orbital_energy, overlap_1d, overlap_eh, overlap_matrix,
)
from .interaction import (
    CoulombTensor, build_tensors, coulomb_displaced, coulomb_oracle, coulomb_same_center,
)
from .manybody import (
    Configuration, EigenSolution, ExchangeParams, NO_EXCHANGE, assemble_hamiltonian,
    decompose_exciton_energy, diagonalize, enumerate_configs, exciton_doublet, solve,
    solve_sector,
)
from .spectra import (
    EmissionLine, biexciton_lines, broadened_spectrum, classify_lines, emission_spectrum,
    exciton_lines, polarization_matrix,
)
from .sweep import (
    Model, PAPER_EPS_R, SweepRecord, calibrate_eps_r, find_crossing, paper_model,
    run_sweep, stark_report, xx_binding,
)
from .cascade import CascadeTransitions, cascade_transitions, degeneracy_report, spectral_overlap
from .errors import ConfigError, NoCrossingError, NumericalError

__version__ = "0.1.0"
