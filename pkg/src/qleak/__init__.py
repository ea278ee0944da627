"""Leakage certificates for classical data carried by quantum states."""

from .channels import (
    AllPairs,
    DpCheckReport,
    DpPairResult,
    DpParams,
    ExplicitPairs,
    QuantumChannel,
    TraceDistanceNeighbours,
    apply,
    apply_ensemble,
    compose,
    depolarizing_global,
    depolarizing_local,
    dp_epsilon_bound_depolarizing,
    identity_channel,
    leakage_after_channel,
    random_channel,
    tensor,
    verify_dp_on_ensemble,
)
from .divergences import (
    ORDER_INF,
    ORDER_ONE,
    ConditionalKernel,
    ProbVector,
    RenyiOrder,
    petz_renyi,
    relative_entropy,
    renyi_classical,
    sandwiched_renyi,
    sibson_information,
)
from .errors import (
    ChainViolationError,
    DimensionMismatch,
    EigenSolverError,
    LpSolverError,
    QleakError,
    UnsupportedModeError,
    ValidationError,
)
from .leakage import (
    ChainReport,
    Ensemble,
    LeakageCertificate,
    Povm,
    accessible_information_lower,
    barycentric_leakage,
    holevo_information,
    inequality_chain_report,
    max_leakage,
    pairwise_leakage,
    povm_leakage,
    sandwiched_inf_mutual_information,
    square_root_measurement,
)
from .linalg import (
    DensityOperator,
    HermitianOperator,
    Spectrum,
    eig_hermitian,
    kron,
    operator_power,
    partial_trace,
    random_density,
    random_unitary,
    support_contained,
    trace_distance,
    von_neumann_entropy,
)
from .sdp import (
    DEFAULT_GAP_TOL,
    LmiProgram,
    SdpSolution,
    dominating_program,
    matrix_from_coords,
    solve,
    violation_certificate,
    weights_program,
)
from .vqml import (
    AngleEncoding,
    BasisEncoding,
    TradeoffRow,
    VariationalModel,
    basis_classifier,
    circuit_unitary,
    classify_probabilities,
    encode_ensemble,
    performance_degradation,
    random_model,
    tradeoff_curve,
)

__all__ = [
    "AllPairs",
    "AngleEncoding",
    "BasisEncoding",
    "ChainReport",
    "ChainViolationError",
    "ConditionalKernel",
    "DEFAULT_GAP_TOL",
    "DensityOperator",
    "DimensionMismatch",
    "DpCheckReport",
    "DpPairResult",
    "DpParams",
    "EigenSolverError",
    "Ensemble",
    "ExplicitPairs",
    "HermitianOperator",
    "LeakageCertificate",
    "LmiProgram",
    "LpSolverError",
    "ORDER_INF",
    "ORDER_ONE",
    "Povm",
    "ProbVector",
    "QleakError",
    "QuantumChannel",
    "RenyiOrder",
    "SdpSolution",
    "Spectrum",
    "TraceDistanceNeighbours",
    "TradeoffRow",
    "UnsupportedModeError",
    "ValidationError",
    "VariationalModel",
    "accessible_information_lower",
    "apply",
    "apply_ensemble",
    "barycentric_leakage",
    "basis_classifier",
    "circuit_unitary",
    "classify_probabilities",
    "compose",
    "depolarizing_global",
    "depolarizing_local",
    "dominating_program",
    "dp_epsilon_bound_depolarizing",
    "eig_hermitian",
    "encode_ensemble",
    "holevo_information",
    "identity_channel",
    "inequality_chain_report",
    "kron",
    "leakage_after_channel",
    "matrix_from_coords",
    "max_leakage",
    "operator_power",
    "pairwise_leakage",
    "partial_trace",
    "performance_degradation",
    "petz_renyi",
    "povm_leakage",
    "random_channel",
    "random_density",
    "random_model",
    "random_unitary",
    "relative_entropy",
    "renyi_classical",
    "sandwiched_inf_mutual_information",
    "sandwiched_renyi",
    "sibson_information",
    "solve",
    "square_root_measurement",
    "support_contained",
    "tensor",
    "trace_distance",
    "tradeoff_curve",
    "verify_dp_on_ensemble",
    "violation_certificate",
    "von_neumann_entropy",
    "weights_program",
]

__version__ = "0.1.0"
