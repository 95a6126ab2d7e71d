"""weaklab: sequential weak quantum measurements with Gaussian pointers.

Exact and weak-regime joint pointer moments, weak values and their
bounds, Monte-Carlo outcome sampling, anomaly searches, and a causal
witness, for finite-dimensional systems.
"""

from . import errors
from .optimize import (
    OptimizationResult,
    SearchSpacePoint,
    chain_point,
    minimize_pointer_product,
    minimize_weak_value_real,
)
from .pointer import (
    GaussianPointer,
    PointerOperatorKind,
    displaced_norm,
    linearization_error,
    matrix_element,
    wavefunction,
    weak_regime_check,
)
from .qm import (
    KET_0,
    KET_1,
    KET_PLUS,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    MixedState,
    Observable,
    PovmElement,
    PureState,
    SpectralDecomposition,
    commutes,
    identity_observable,
    identity_povm,
    projector_from_ket,
    qubit_ket,
    spectral_decompose,
    spectral_norm,
    spectrum_hull,
    tensor,
)
from .scenario_io import load_scenario, save_scenario, scenario_from_dict, scenario_to_dict
from .scenarios import (
    CausalStructure,
    CausalVerdict,
    build_common_cause,
    build_illustrative,
    build_pauli_xy,
    build_projector_chain,
    causal_witness,
    chain_weak_value,
)
from .simulator import (
    EvaluationMethod,
    MeasurementStep,
    MomentPattern,
    MomentResult,
    PointerStats,
    SampleStatistics,
    Scenario,
    WeakRegimeWarning,
    exact_moment,
    nested_anticommutator_value,
    recover_weak_value,
    sample_outcomes,
    single_measurement_stats,
    weak_prediction,
)
from .weak_values import (
    MeasurementSequence,
    ProjectorPairReport,
    WeakValue,
    WeakValueKind,
    norm_product_bound,
    projector_pair_report,
    pure_weak_value,
    seq_weak_value,
)

__version__ = "0.1.0"

__all__ = [
    "CausalStructure",
    "CausalVerdict",
    "EvaluationMethod",
    "GaussianPointer",
    "KET_0",
    "KET_1",
    "KET_PLUS",
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "MeasurementSequence",
    "MeasurementStep",
    "MixedState",
    "MomentPattern",
    "MomentResult",
    "Observable",
    "OptimizationResult",
    "PointerOperatorKind",
    "PointerStats",
    "PovmElement",
    "ProjectorPairReport",
    "PureState",
    "SampleStatistics",
    "Scenario",
    "SearchSpacePoint",
    "SpectralDecomposition",
    "WeakRegimeWarning",
    "WeakValue",
    "WeakValueKind",
    "build_common_cause",
    "build_illustrative",
    "build_pauli_xy",
    "build_projector_chain",
    "causal_witness",
    "chain_point",
    "chain_weak_value",
    "commutes",
    "displaced_norm",
    "errors",
    "exact_moment",
    "identity_observable",
    "identity_povm",
    "linearization_error",
    "load_scenario",
    "matrix_element",
    "minimize_pointer_product",
    "minimize_weak_value_real",
    "nested_anticommutator_value",
    "norm_product_bound",
    "projector_from_ket",
    "projector_pair_report",
    "pure_weak_value",
    "qubit_ket",
    "recover_weak_value",
    "sample_outcomes",
    "save_scenario",
    "scenario_from_dict",
    "scenario_to_dict",
    "seq_weak_value",
    "single_measurement_stats",
    "spectral_decompose",
    "spectral_norm",
    "spectrum_hull",
    "tensor",
    "wavefunction",
    "weak_prediction",
    "weak_regime_check",
]
