"""Verification backends: dense branch enumeration, stabilizer tracking,
and the density-matrix filter check."""

from .channels import (
    COMPLETENESS_TOL,
    FilterReport,
    KrausChannel,
    apply_channel,
    completeness_residual,
    filter_identity_check,
    pauli_coefficients,
    pauli_label_matrix,
    random_channel,
    random_density_matrix,
    run_filter,
    trace_distance,
)
from .stabilizer import group_contains, groups_match, stabilizer_run
from .statevector import (
    ZERO_BRANCH_THRESHOLD,
    SimulationIntegrityError,
    apply_gates,
    apply_pauli,
    basis_index,
    equal_up_to_global_phase,
    random_state,
    run_all_branches,
    run_branch,
    sample_run,
    tableau_apply,
    tableau_unitary,
)

__all__ = [
    "COMPLETENESS_TOL",
    "FilterReport",
    "KrausChannel",
    "SimulationIntegrityError",
    "ZERO_BRANCH_THRESHOLD",
    "apply_channel",
    "apply_gates",
    "apply_pauli",
    "basis_index",
    "completeness_residual",
    "equal_up_to_global_phase",
    "filter_identity_check",
    "group_contains",
    "groups_match",
    "pauli_coefficients",
    "pauli_label_matrix",
    "random_channel",
    "random_density_matrix",
    "random_state",
    "run_all_branches",
    "run_branch",
    "run_filter",
    "sample_run",
    "stabilizer_run",
    "tableau_apply",
    "tableau_unitary",
    "trace_distance",
]
