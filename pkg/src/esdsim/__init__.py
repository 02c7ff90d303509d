"""Two entangled qubits in local thermal or squeezed reservoirs.

The package evolves a qubit pair through per-qubit reservoir channels that
are extracted from the master equation via the Choi matrix and validated
against direct integration, then reports entanglement (negativity),
disturbance, and entropy exchange over scaled time.
"""

__version__ = "0.1.0"

from .channels import (
    CHOI_DERIVED,
    PAPER_LITERAL,
    PAPER_REPAIRED,
    KrausAmplitudes,
    KrausSet,
    apply_local_channels,
    choi_of_kraus,
    choi_series,
    closed_form_coefficients,
    closed_form_matrix,
    closed_form_output,
    completeness_defect,
    kraus_amplitudes,
    kraus_choi_derived,
    kraus_from_choi,
    kraus_paper,
    kraus_repaired,
    propagator_choi,
)
from .errors import (
    ChannelNotTP,
    DimensionMismatch,
    EmptySeries,
    IntegratorFailure,
    NotCP,
    NotHermitian,
    NotPositive,
    NumericalDomain,
    OutOfRange,
    TraceDefect,
    ValidationError,
)
from .lindblad import (
    IntegrationResult,
    LindbladSpec,
    integrate,
    lindblad_rhs,
    liouvillian,
    single_qubit_steady_state,
)
from .linalg import (
    EigenResult,
    charpoly_eigvalsh,
    hermitian_eig,
    kron,
    partial_trace,
    partial_transpose,
)
from .measures import (
    disturbance,
    entropy_exchange,
    esd_time,
    fidelity,
    negativity,
    plateau_onset,
    saturation_onset,
    trace_distance,
)
from .reservoir import ReservoirParams, squeeze_bound
from .states import (
    BellWeights,
    CorrelationTriple,
    DensityMatrix,
    MAXIMAL_TRIPLE,
    PARTIAL_TRIPLE,
    bell_weights,
    state_from_bloch,
    state_from_correlations,
    validate_state,
    werner,
)
from .sweep import GridSummary, SweepConfig, TimeSeriesRow, run_evolve, run_sweep
from .cli import cli_main
