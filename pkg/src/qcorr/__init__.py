"""Entropic and trace-distance correlations of two-qubit Bell-diagonal states."""

from qcorr.core import (
    CorrelationVector,
    MeasurementDirection,
    NotHermitianError,
    UnphysicalStateError,
    apply_measurement,
    bell_density,
    is_physical,
    sample_physical,
    spectrum_bell,
    trace_norm,
)
from qcorr.entropic import c_e_closed, entropic_triple, q_e_closed, t_e_closed
from qcorr.geometric import (
    CorrelationReport,
    InvariantViolation,
    analyze,
    c_g_closed,
    geometric_triple,
    q_g_closed,
    t_g_closed,
)
from qcorr.jacobi import ConvergenceError, jacobi_eigh

__all__ = [
    "ConvergenceError",
    "CorrelationReport",
    "CorrelationVector",
    "InvariantViolation",
    "MeasurementDirection",
    "NotHermitianError",
    "UnphysicalStateError",
    "analyze",
    "apply_measurement",
    "bell_density",
    "c_e_closed",
    "c_g_closed",
    "entropic_triple",
    "geometric_triple",
    "is_physical",
    "jacobi_eigh",
    "q_e_closed",
    "q_g_closed",
    "sample_physical",
    "spectrum_bell",
    "t_e_closed",
    "t_g_closed",
    "trace_norm",
]
