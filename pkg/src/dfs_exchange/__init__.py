"""Decoherence-free subspaces under exchange errors.

Operator algebra on K-qubit registers, singlet bases and leakage checks,
exact singlet counting, the five-qubit perfect code, and a simulator for the
20-qubit concatenated scheme (five clusters of four qubits).
"""

from .combinatorics import (
    MultiplicityTable,
    YoungDiagram,
    dicke_multiplicity,
    encoded_qubit_count,
    hook_lengths,
    singlet_multiplicity,
    standard_tableaux_count,
)
from .concat import (
    ConcatState,
    ErrorEvent,
    ErrorRateModel,
    TrialReport,
    apply_exchange_event,
    lift_encoded_to_physical,
    project_physical_to_encoded,
    recover,
    run_monte_carlo,
    single_event_sweep,
)
from .dfs import (
    DFSBasis,
    EncodedOperator,
    check_dfs_condition,
    check_invariance,
    dfs_basis,
    encoded_pauli_decomposition,
    project_operator,
    verify_constant_j,
)
from .five_qubit import StabilizerCode, correct, encode, five_qubit_code, measure_syndrome
from .operators import (
    ExchangeModel,
    SparseOperator,
    StateVector,
    apply,
    commutator,
    embed_single_qubit,
    exchange_hamiltonian,
    exchange_operator,
    exchange_unitary,
    total_spin_operator,
    total_spin_squared,
)

__version__ = "0.1.0"

__all__ = [
    "apply",
    "apply_exchange_event",
    "check_dfs_condition",
    "check_invariance",
    "commutator",
    "ConcatState",
    "correct",
    "dfs_basis",
    "DFSBasis",
    "dicke_multiplicity",
    "embed_single_qubit",
    "encode",
    "encoded_pauli_decomposition",
    "encoded_qubit_count",
    "EncodedOperator",
    "ErrorEvent",
    "ErrorRateModel",
    "exchange_hamiltonian",
    "exchange_operator",
    "exchange_unitary",
    "ExchangeModel",
    "five_qubit_code",
    "hook_lengths",
    "lift_encoded_to_physical",
    "measure_syndrome",
    "MultiplicityTable",
    "project_operator",
    "project_physical_to_encoded",
    "recover",
    "run_monte_carlo",
    "single_event_sweep",
    "singlet_multiplicity",
    "SparseOperator",
    "StabilizerCode",
    "standard_tableaux_count",
    "StateVector",
    "total_spin_operator",
    "total_spin_squared",
    "TrialReport",
    "verify_constant_j",
    "YoungDiagram",
]
