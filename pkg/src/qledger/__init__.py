"""Work, heat, and coherence-energy accounting for finite-dimensional
quantum trajectories.

Feed a sampled trajectory (state, Hamiltonian) pairs to
:func:`analyze` and get back an :class:`EnergyLedger` whose cumulative
columns split every change of internal energy into work (moving
levels), heat (moving populations), and coherence energy (rotating
eigenbases), together with the classical two-way cross-checks.
"""

from .accounting import (
    ClassicalDecompositions,
    EnergyLedger,
    StepIncrement,
    Trajectory,
    TrajectorySample,
    analyze,
    classical_decompositions,
    first_law_residual,
    populations_energy_basis,
    step_increment,
)
from .channels import (
    DecayParams,
    KrausChannel,
    ad_closed_form,
    amplitude_damping_kraus,
    apply_channel,
    iterate_channel,
    plus_state,
    rabi_state,
)
from .errors import (
    DimMismatch,
    InvalidSpec,
    NegativeTime,
    NoConvergence,
    NonPositiveTemperature,
    NotHermitian,
    ProbabilityOutOfRange,
    QledgerError,
    TrackingFailure,
    TrajectoryFormatError,
)
from .linalg import (
    SpectralDecomposition,
    branch_overlaps,
    hermitian_eig,
    hermiticity_defect,
    trace_product,
    track_eigenpairs,
)
from .qstate import (
    DensityMatrix,
    Hamiltonian,
    OverlapMatrix,
    ThermalParams,
    free_energy,
    gibbs_state,
    internal_energy,
    l1_coherence,
    overlap_matrix,
    partition_function,
    state_decomposition,
    two_level_hamiltonian,
    von_neumann_entropy,
)
from .scenarios import (
    KINDS,
    AnalyticReference,
    IsothermalReference,
    ReferencePoint,
    ScenarioSpec,
    analytic_reference,
    build_trajectory,
    emission_coherence_limit,
    emission_coherence_ref,
    emission_eigensystem,
    emission_heat_limit,
    emission_heat_ref,
    isothermal_reference,
    rabi_coherence_ref,
)
from .trajio import (
    LEDGER_COLUMNS,
    ledger_text,
    read_trajectory,
    write_ledger,
    write_trajectory,
)

__version__ = "0.1.0"

__all__ = [
    "AnalyticReference",
    "ClassicalDecompositions",
    "DecayParams",
    "DensityMatrix",
    "DimMismatch",
    "EnergyLedger",
    "Hamiltonian",
    "InvalidSpec",
    "IsothermalReference",
    "KINDS",
    "KrausChannel",
    "LEDGER_COLUMNS",
    "NegativeTime",
    "NoConvergence",
    "NonPositiveTemperature",
    "NotHermitian",
    "OverlapMatrix",
    "ProbabilityOutOfRange",
    "QledgerError",
    "ReferencePoint",
    "ScenarioSpec",
    "SpectralDecomposition",
    "StepIncrement",
    "ThermalParams",
    "TrackingFailure",
    "Trajectory",
    "TrajectoryFormatError",
    "TrajectorySample",
    "ad_closed_form",
    "amplitude_damping_kraus",
    "analytic_reference",
    "analyze",
    "apply_channel",
    "branch_overlaps",
    "build_trajectory",
    "classical_decompositions",
    "emission_coherence_limit",
    "emission_coherence_ref",
    "emission_eigensystem",
    "emission_heat_limit",
    "emission_heat_ref",
    "first_law_residual",
    "free_energy",
    "gibbs_state",
    "hermitian_eig",
    "hermiticity_defect",
    "internal_energy",
    "isothermal_reference",
    "iterate_channel",
    "l1_coherence",
    "ledger_text",
    "overlap_matrix",
    "partition_function",
    "plus_state",
    "populations_energy_basis",
    "rabi_coherence_ref",
    "rabi_state",
    "read_trajectory",
    "state_decomposition",
    "step_increment",
    "trace_product",
    "track_eigenpairs",
    "two_level_hamiltonian",
    "von_neumann_entropy",
    "write_ledger",
    "write_trajectory",
]
