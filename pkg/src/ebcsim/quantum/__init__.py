from .symbolic import (
    Bb84Register, Flip, MeasureAndResend, Replace, apply_depolarizing, apply_pauli,
    corrupt_positions, measure_and_collapse, measure_in_basis, merge, prepare_bb84,
)
from .dense import (
    DenseState, bb84_state, fidelity, outcome_distribution, pure_trace_distance,
    random_density_matrix, register_to_dense, trace_distance, uhlmann_purifications,
)

__all__ = [
    "Bb84Register", "Flip", "MeasureAndResend", "Replace", "apply_depolarizing",
    "apply_pauli", "corrupt_positions", "measure_and_collapse", "measure_in_basis",
    "merge", "prepare_bb84", "DenseState", "bb84_state", "fidelity",
    "outcome_distribution", "pure_trace_distance", "random_density_matrix",
    "register_to_dense", "trace_distance", "uhlmann_purifications",
]
