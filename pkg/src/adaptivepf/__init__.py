"""Adaptive product-formula circuits for quantum state evolution.

Builds low-depth Pauli-rotation circuits on the fly by projecting the exact
motion of a state onto the tangent space of the current circuit and appending
new generators only when the projection residual crosses a threshold.  Ships
with a dense-statevector engine, a first-order Trotter baseline, and a
real-time Krylov ground-energy estimator.
"""

from .adaptive import (
    Ansatz,
    NormalEquations,
    SolveResult,
    apply_ansatz,
    build_normal_equations,
    compute_delta,
    compute_delta3,
    grow_ansatz,
    solve_coefficients,
    tangent_vector,
)
from .errors import (
    CapabilityError,
    ConfigError,
    DegenerateSubspaceError,
    DimensionError,
    GrowthStallError,
    ParseError,
    SchemaError,
)
from .evolution import (
    EvolutionConfig,
    EvolutionTrace,
    StepRecord,
    adaptive_evolve,
    adaptive_single_step,
    fidelity,
    trotter_evolve,
)
from .krylov import (
    AdaptiveBackend,
    ExactBackend,
    KrylovConfig,
    KrylovMatrices,
    TrotterBackend,
    build_krylov_basis,
    build_krylov_matrices,
    build_krylov_states,
    krylov_ground_energy,
    solve_generalized_eig,
)
from .models import (
    TfimSpec,
    ansatz_cnot_count,
    cnot_cost,
    format_hamiltonian,
    gen_tfim,
    load_hamiltonian,
    parse_hamiltonian_file,
    save_hamiltonian,
)
from .pauli import Hamiltonian, PauliTerm, PauliWord, commutes, multiply, parse_word
from .statevector import (
    EXACT_EVOLVE_MAX_QUBITS,
    StateVector,
    apply_hamiltonian,
    apply_pauli,
    apply_pauli_rotation,
    basis_state,
    dense_hamiltonian,
    exact_evolve,
    expect_h_and_h2,
    inner,
)
from .traceio import read_trace, trace_to_csv, write_trace

__version__ = "0.1.0"

__all__ = [
    "Ansatz",
    "NormalEquations",
    "SolveResult",
    "apply_ansatz",
    "build_normal_equations",
    "compute_delta",
    "compute_delta3",
    "grow_ansatz",
    "solve_coefficients",
    "tangent_vector",
    "CapabilityError",
    "ConfigError",
    "DegenerateSubspaceError",
    "DimensionError",
    "GrowthStallError",
    "ParseError",
    "SchemaError",
    "EvolutionConfig",
    "EvolutionTrace",
    "StepRecord",
    "adaptive_evolve",
    "adaptive_single_step",
    "fidelity",
    "trotter_evolve",
    "AdaptiveBackend",
    "ExactBackend",
    "KrylovConfig",
    "KrylovMatrices",
    "TrotterBackend",
    "build_krylov_basis",
    "build_krylov_matrices",
    "build_krylov_states",
    "krylov_ground_energy",
    "solve_generalized_eig",
    "TfimSpec",
    "ansatz_cnot_count",
    "cnot_cost",
    "format_hamiltonian",
    "gen_tfim",
    "load_hamiltonian",
    "parse_hamiltonian_file",
    "save_hamiltonian",
    "Hamiltonian",
    "PauliTerm",
    "PauliWord",
    "commutes",
    "multiply",
    "parse_word",
    "EXACT_EVOLVE_MAX_QUBITS",
    "StateVector",
    "apply_hamiltonian",
    "apply_pauli",
    "apply_pauli_rotation",
    "basis_state",
    "dense_hamiltonian",
    "exact_evolve",
    "expect_h_and_h2",
    "inner",
    "read_trace",
    "trace_to_csv",
    "write_trace",
    "__version__",
]
