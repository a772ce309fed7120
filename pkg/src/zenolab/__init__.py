"""Weak-measurement Zeno protection of stabilizer-encoded states.

Exact small-system simulation of repeated weak stabilizer measurements,
closed-form deviation bounds, and the two-local cat-ancilla realization of
many-body weak measurements.
"""

__version__ = "0.1.0"

from .bounds import BoundInputs, BoundResult, bound_exact, bound_first_order, bound_strong
from .hilbert import ComplexOperator, DensityMatrix, encode_codeword, trace_distance
from .measurement import KrausSet, MeasurementStrength, apply_weak_single
from .pauli import PauliOperator, StabilizerCode, build_detection_code, logical_operator
from .protocol import ExperimentSpec, HamiltonianModel, ProtocolConfig, run_protocol

__all__ = [
    "__version__",
    "BoundInputs",
    "BoundResult",
    "bound_exact",
    "bound_first_order",
    "bound_strong",
    "ComplexOperator",
    "DensityMatrix",
    "encode_codeword",
    "trace_distance",
    "KrausSet",
    "MeasurementStrength",
    "apply_weak_single",
    "PauliOperator",
    "StabilizerCode",
    "build_detection_code",
    "logical_operator",
    "ExperimentSpec",
    "HamiltonianModel",
    "ProtocolConfig",
    "run_protocol",
]
