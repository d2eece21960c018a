"""cpbox: a charge qubit coupled to a phase-damped single-mode cavity.

The package provides a closed-form dressed-state solution of the joint
dynamics, an independent Lindblad integrator used as the ground truth,
coherence-loss and entanglement metrics, and a parameter-sweep CLI that
writes flat CSV files.
"""

__version__ = "0.1.0"

from .closed_form import ClosedFormMode, inversion_series, joint_state
from .density import DensityMatrix, basis_index
from .errors import (
    CpboxError,
    DimensionMismatchError,
    InvalidParameterError,
    NumericalError,
    PositivityError,
    StepSizeUnderflowError,
    TruncationTooSmallError,
)
from .lindblad import (
    IntegratorConfig,
    JointHamiltonian,
    build_hamiltonian,
    evolve,
    liouvillian_apply,
)
from .metrics import (
    MetricRow,
    atomic_inversion,
    concurrence_effective,
    concurrence_two_qubit,
    idempotency_defect,
    mean_photons,
    metric_row,
    negativity,
    partial_trace_field,
    partial_trace_qubit,
)
from .model import (
    CoherentAmplitudes,
    DeviceParams,
    FockTruncation,
    InitialState,
    ReducedParams,
    choose_truncation,
    coherent_amplitudes,
    rabi_frequency,
    reduce_params,
    validate_regime,
)

__all__ = [
    "__version__",
    "ClosedFormMode",
    "CoherentAmplitudes",
    "CpboxError",
    "DensityMatrix",
    "DeviceParams",
    "DimensionMismatchError",
    "FockTruncation",
    "InitialState",
    "IntegratorConfig",
    "InvalidParameterError",
    "JointHamiltonian",
    "MetricRow",
    "NumericalError",
    "PositivityError",
    "ReducedParams",
    "StepSizeUnderflowError",
    "TruncationTooSmallError",
    "atomic_inversion",
    "basis_index",
    "build_hamiltonian",
    "choose_truncation",
    "coherent_amplitudes",
    "concurrence_effective",
    "concurrence_two_qubit",
    "evolve",
    "idempotency_defect",
    "inversion_series",
    "joint_state",
    "liouvillian_apply",
    "mean_photons",
    "metric_row",
    "negativity",
    "partial_trace_field",
    "partial_trace_qubit",
    "rabi_frequency",
    "reduce_params",
    "validate_regime",
]
