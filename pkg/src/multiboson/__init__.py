"""Exactly solvable multiboson cluster models.

Ladder (sl(2)-type) representations built from l-boson clusters on a
truncated Fock space, one- and two-mode quadratic-Casimir Hamiltonians
diagonalized through classical orthogonal polynomials, coherent-state
calculus, and time evolution of occupation observables -- every closed form
cross-checked against an independent tridiagonal eigensolver.
"""

__version__ = "0.1.0"

from .errors import (BoundaryAmbiguityError, NoBoundStateError,
                     NumericalFailureError, TruncationOverflowError,
                     UnsupportedCaseError, UnsupportedElementError)
from .orthopoly import (ContinuousDualHahn, ContinuousPart, DualHahn, Laguerre,
                        Meixner, MeixnerPollaczek, PolyFamily, SpectralMeasure,
                        bessel_k, eval_orthonormal, gamma_abs_sq, gram_check,
                        hyp0f1, hyp3f2_terminating, ln_gamma)
from .jacobi import JacobiOperator, atom_eigenvector, oracle_eigh, oracle_eigs
from .rep import (MultibosonRep, OneModeSector, StateVector, alpha0,
                  alpha_minus, build_generators_full, casimir_value, residue,
                  sector_coeffs, sector_matrices, series_class)
from .bogoliubov import (GeneratorAction, GroupElement, act_on_labels,
                         action_matrix, implementer, inverse, meixner_c,
                         multiply, orbit_invariant)
from .onemode import (CaseLabel, OneModeHamiltonian, classify,
                      eigenvalue_discrete, eigenvectors_discrete, evolve,
                      jacobi, spectrum)
from .twomode import (CBlock, DBlock, TwoModeHamiltonian, TwoModeRep,
                      UVWParams, build_h_matrix, canonical_matrix,
                      coupling_functions, hc_block_jacobi,
                      hc_eigenvectors_discrete, hc_spectrum,
                      hc_truncation_check, hd_block_jacobi, hd_eigenvectors,
                      hd_spectrum, manley_rowe_blocks, uvw_params)
from .coherent import (CoherentState, SU11Element, coherent_amplitudes,
                       disc_eigenfunction, holo_apply, kernel, radial_measure,
                       su11_flow)
from .evolution import (CanonicalInteraction, FullModel, ObservableSeries,
                        basis_state, evolve_full, observables, preset,
                        run_series)
