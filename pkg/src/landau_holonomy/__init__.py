"""Geometric phases of coherent and squeezed Landau-level states.

Truncated two-mode Fock simulation with independent numerical oracles for
every closed-form result: finite-difference Berry connections, path-ordered
Wilson loops, real-space quadrature, and brute-force adiabatic evolution.
"""

__version__ = "0.1.0"

from .adiabatic import (
    EvolutionRecord,
    LoopFidelityError,
    NormDriftError,
    Schedule,
    degenerate_drift,
    degenerate_record,
    extract_geometric_phase,
    propagate,
    static_path,
    transport_frame,
)
from .connections import (
    B_GUARD_MIN,
    ConnectionMatrix,
    FieldGuardError,
    connection_analytic,
    connection_numeric,
    degenerate_block,
)
from .flux import (
    GaussianFlux,
    QuadratureGrid,
    ValidityReport,
    circulation,
    coherent_state_wavefunction,
    flux_field,
    ground_state,
    shifted_ground_overlap,
    to_displacement,
    to_shift,
    validity,
    vector_potential,
)
from .fock import (
    FockBasis,
    NumericalGuardError,
    OperatorMatrix,
    OperatorRole,
    ParameterPoint,
    StateVector,
    TruncationError,
    build_basis,
    commutator_defect,
    ladder_a,
    ladder_b,
)
from .holonomy import (
    HolonomyResult,
    ParameterPath,
    abelian_phase,
    circle_x1x2,
    commuting_closed_form,
    degenerate_tridiagonal,
    flux_loop_phase,
    nonabelian_holonomy,
    rectangle_x2_lnb,
    signed_area,
)
from .operators import (
    GuardBandError,
    HamiltonianForm,
    HamiltonianKind,
    b_embedding,
    displacement,
    eigenstate,
    embedding_generator,
    hamiltonian,
    max_squeeze,
    required_n_max,
    squeeze,
)
