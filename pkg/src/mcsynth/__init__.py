"""mcsynth: Clifford circuit synthesis via ancilla measurements.

Compiles an n-qubit Clifford, given as a stabilizer tableau, into a staged
circuit of |+> ancillas, controlled Paulis, X-basis measurements and
classical Pauli corrections, and verifies the result by simulation.
"""

from .circuit import (
    Circuit,
    ClassicalCorrection,
    ControlledPauli,
    MeasureX,
    PrepPlus,
    depth,
    depth_by_stage,
    parse_circuit,
    serialize_circuit,
    synthesize,
    synthesize_from_inverse,
    two_qubit_gate_count,
    validate_circuit,
)
from .pauli import (
    PauliError,
    PhasedPauli,
    SignedPauli,
    commutes,
    format_pauli,
    multiply,
    parse_pauli,
    single_pauli,
    weight,
)
from .tableau import (
    Tableau,
    TableauError,
    apply_gate,
    check_symplectic,
    compose,
    conjugate,
    fold_gates,
    identity_tableau,
    invert,
    parse_gates,
    parse_tableau,
    random_clifford,
    random_tableau,
    serialize_gates,
    serialize_tableau,
    tableau_weight,
)

__version__ = "0.1.0"
