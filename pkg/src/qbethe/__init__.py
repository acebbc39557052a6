"""Bethe ansatz toolkit for the open q-boson chain and its continuum limit.

The package computes transfer-matrix spectra and Bethe eigenfunctions for a
bosonic lattice gas on ``m + 1`` sites with integrable open boundaries, checks
the algebraic identities that make the model solvable, and compares the
lattice wave functions against the Laplacian eigenfunctions on the Weyl
alcove that they converge to.
"""

from .core import (
    ContinuumParams,
    ModelParams,
    Tolerances,
    DEFAULT_TOL,
    q_factorial,
    q_int,
)
from .fock import (
    FockVector,
    SectorBasis,
    apply_hamiltonian,
    enumerate_sector,
    inner_product,
    sector_basis,
    sector_dimension,
    weight_delta,
)
from .transfer import (
    apply_boundary,
    apply_creation,
    apply_periodic,
    apply_transfer,
    bethe_eigenvalues,
    hamiltonian_eigenvalue,
    hamiltonian_matrix,
    operator_matrix,
    transfer_matrix,
)
from .bethe import (
    MorseProblem,
    SpectralPoint,
    bae_residual,
    casoratian,
    morse_gradient,
    morse_hessian,
    solve_spectral_point,
)
from .hall_littlewood import (
    HLParams,
    branch_coeff,
    gram_discrete,
    hl_direct,
    hl_leading_coefficient,
    one_particle_wave,
    pieri_residual,
    transfer_pieri_residual,
    wave_at_point,
    wave_by_branching,
    wave_by_creation,
    wave_by_symmetrization,
)
from .continuum import (
    ExponentialSum,
    alcove_integral,
    continuum_wave,
    convergence_sweep,
    gram_continuum,
    robin_residual,
    staircase_embed,
)
from .structure import CheckResult, verify_structure

__all__ = [
    "CheckResult",
    "ContinuumParams",
    "DEFAULT_TOL",
    "ExponentialSum",
    "FockVector",
    "HLParams",
    "ModelParams",
    "MorseProblem",
    "SectorBasis",
    "SpectralPoint",
    "Tolerances",
    "alcove_integral",
    "apply_boundary",
    "apply_creation",
    "apply_hamiltonian",
    "apply_periodic",
    "apply_transfer",
    "bae_residual",
    "bethe_eigenvalues",
    "branch_coeff",
    "casoratian",
    "continuum_wave",
    "convergence_sweep",
    "enumerate_sector",
    "gram_continuum",
    "gram_discrete",
    "hamiltonian_eigenvalue",
    "hamiltonian_matrix",
    "hl_direct",
    "hl_leading_coefficient",
    "inner_product",
    "morse_gradient",
    "morse_hessian",
    "one_particle_wave",
    "operator_matrix",
    "pieri_residual",
    "q_factorial",
    "q_int",
    "robin_residual",
    "sector_basis",
    "sector_dimension",
    "solve_spectral_point",
    "staircase_embed",
    "transfer_matrix",
    "transfer_pieri_residual",
    "verify_structure",
    "wave_at_point",
    "wave_by_branching",
    "wave_by_creation",
    "wave_by_symmetrization",
    "weight_delta",
]

__version__ = "0.1.0"
