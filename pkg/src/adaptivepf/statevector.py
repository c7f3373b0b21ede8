"""Dense statevector kernels and an eigendecomposition-based exact evolver.

Basis convention: amplitude index ``k`` stores qubit ``q`` in bit ``q`` of
``k`` (qubit 0 is the least significant bit).  With that convention the matrix
of a Pauli word is a permutation of the amplitudes plus per-amplitude phases,
which is how every kernel here is implemented.

``exact_evolve`` deliberately shares no code with the rotation kernels: it
assembles the dense Hamiltonian with Kronecker products and exponentiates via
a Hermitian eigendecomposition, so it can serve as an oracle for circuits
built out of the kernels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Union

import numpy as np

from .errors import CapabilityError, DimensionError, ParseError
from .pauli import Hamiltonian, PauliWord

#: Largest register for which dense 2**n x 2**n construction is allowed.
EXACT_EVOLVE_MAX_QUBITS = 14

_CONSTRUCT_NORM_TOL = 1e-8


@dataclass(frozen=True)
class StateVector:
    """Normalized pure state on ``n_qubits`` qubits."""

    n_qubits: int
    amps: np.ndarray

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError(f"n_qubits must be >= 1, got {self.n_qubits}")
        amps = np.array(self.amps, dtype=np.complex128, copy=True)
        if amps.shape != (1 << self.n_qubits,):
            raise DimensionError(
                f"amplitude vector has shape {amps.shape}, expected ({1 << self.n_qubits},)"
            )
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > _CONSTRUCT_NORM_TOL:
            raise ValueError(f"state norm is {norm!r}, expected 1")
        amps.setflags(write=False)
        object.__setattr__(self, "amps", amps)

    @classmethod
    def normalized(cls, n_qubits: int, amps: np.ndarray) -> "StateVector":
        """Construct from an unnormalized amplitude vector."""
        amps = np.asarray(amps, dtype=np.complex128)
        norm = float(np.linalg.norm(amps))
        if norm == 0.0 or not math.isfinite(norm):
            raise ValueError(f"cannot normalize vector with norm {norm}")
        return cls(n_qubits, amps / norm)

    @property
    def dim(self) -> int:
        return 1 << self.n_qubits


def basis_state(n_qubits: int, bits: Union[str, int]) -> StateVector:
    """Computational-basis state |bits>.

    A string addresses qubit ``q`` by character ``q`` ("01" puts qubit 0 in
    |0> and qubit 1 in |1>); an integer is taken as the basis index directly.
    """
    if isinstance(bits, str):
        if len(bits) != n_qubits:
            raise ParseError(
                f"bitstring {bits!r} has length {len(bits)}, expected {n_qubits}"
            )
        index = 0
        for pos, ch in enumerate(bits):
            if ch not in "01":
                raise ParseError(f"illegal character {ch!r} at position {pos} of {bits!r}")
            index |= int(ch) << pos
    else:
        index = int(bits)
        if not 0 <= index < (1 << n_qubits):
            raise ValueError(f"basis index {index} out of range for {n_qubits} qubits")
    amps = np.zeros(1 << n_qubits, dtype=np.complex128)
    amps[index] = 1.0
    return StateVector(n_qubits, amps)


# ---------------------------------------------------------------------------
# compiled word action: (P psi)[j] = phase[j] * psi[perm[j]]
# ---------------------------------------------------------------------------


@lru_cache(maxsize=2048)
def _compiled_action(word: PauliWord) -> tuple[np.ndarray, np.ndarray]:
    dim = 1 << word.n_qubits
    idx = np.arange(dim, dtype=np.int64)
    perm = idx ^ word.x_mask
    parity = (np.bitwise_count(perm & word.z_mask) & 1).astype(np.float64)
    y_count = (word.x_mask & word.z_mask).bit_count()
    phase = (1j ** (y_count % 4)) * (1.0 - 2.0 * parity)
    phase = np.asarray(phase, dtype=np.complex128)
    perm.setflags(write=False)
    phase.setflags(write=False)
    return perm, phase


def _pauli_times(word: PauliWord, amps: np.ndarray) -> np.ndarray:
    perm, phase = _compiled_action(word)
    return phase * amps[perm]


def _pauli_times_cols(word: PauliWord, cols: np.ndarray) -> np.ndarray:
    perm, phase = _compiled_action(word)
    return phase[:, None] * cols[perm, :]

def _rotate(word: PauliWord, theta: float, amps: np.ndarray) -> np.ndarray:
    perm, phase = _compiled_action(word)
    return math.cos(theta) * amps + (-1j * math.sin(theta)) * (phase * amps[perm])


def _rotate_cols(word: PauliWord, theta: float, cols: np.ndarray) -> np.ndarray:
    perm, phase = _compiled_action(word)
    return math.cos(theta) * cols + (-1j * math.sin(theta)) * (phase[:, None] * cols[perm, :])


def _apply_hamiltonian_raw(h: Hamiltonian, amps: np.ndarray) -> np.ndarray:
    out = np.zeros_like(amps)
    for term in h.terms:
        out += term.coeff * _pauli_times(term.word, amps)
    return out


def _check_register(n_op: int, psi: StateVector) -> None:
    if n_op != psi.n_qubits:
        raise DimensionError(
            f"operator acts on {n_op} qubits but state has {psi.n_qubits}"
        )


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------


def apply_pauli(word: PauliWord, psi: StateVector) -> StateVector:
    """Return ``P|psi>`` (a permutation of amplitudes with +-1, +-i phases)."""
    _check_register(word.n_qubits, psi)
    return StateVector(psi.n_qubits, _pauli_times(word, psi.amps))


def apply_pauli_rotation(word: PauliWord, theta: float, psi: StateVector) -> StateVector:
    """Return ``exp(-i theta P)|psi> = cos(theta)|psi> - i sin(theta) P|psi>``."""
    _check_register(word.n_qubits, psi)
    if not math.isfinite(theta):
        raise ValueError(f"rotation angle must be finite, got {theta}")
    return StateVector(psi.n_qubits, _rotate(word, theta, psi.amps))


def apply_hamiltonian(h: Hamiltonian, psi: StateVector) -> np.ndarray:
    """Return the unnormalized vector ``H|psi>``."""
    _check_register(h.n_qubits, psi)
    return _apply_hamiltonian_raw(h, psi.amps)


def inner(phi: Union[StateVector, np.ndarray], psi: Union[StateVector, np.ndarray]) -> complex:
    """Hermitian inner product <phi|psi> (first argument conjugated)."""
    a = phi.amps if isinstance(phi, StateVector) else np.asarray(phi)
    b = psi.amps if isinstance(psi, StateVector) else np.asarray(psi)
    if a.shape != b.shape:
        raise DimensionError(f"vector shapes differ: {a.shape} vs {b.shape}")
    return complex(np.vdot(a, b))


def expect_h_and_h2(h: Hamiltonian, psi: StateVector) -> tuple[float, float]:
    """Return ``(<H>, <H^2>)``; the square costs one extra norm, not L^2 work."""
    hpsi = apply_hamiltonian(h, psi)
    e = float(np.real(np.vdot(psi.amps, hpsi)))
    e2 = float(np.real(np.vdot(hpsi, hpsi)))
    return e, e2


# ---------------------------------------------------------------------------
# dense exact evolution (oracle path, independent of the kernels above)
# ---------------------------------------------------------------------------

_SINGLE_QUBIT = {
    "I": np.eye(2, dtype=np.complex128),
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}


def _dense_word(word: PauliWord) -> np.ndarray:
    mat = np.eye(1, dtype=np.complex128)
    # qubit 0 is the least significant bit, so it goes last in the kron chain
    for q in reversed(range(word.n_qubits)):
        letter = ("I", "X", "Z", "Y")[((word.x_mask >> q) & 1) + 2 * ((word.z_mask >> q) & 1)]
        mat = np.kron(mat, _SINGLE_QUBIT[letter])
    return mat


def dense_hamiltonian(h: Hamiltonian) -> np.ndarray:
    """Assemble the dense matrix of ``h`` via Kronecker products."""
    if h.n_qubits > EXACT_EVOLVE_MAX_QUBITS:
        raise CapabilityError(
            f"dense construction limited to {EXACT_EVOLVE_MAX_QUBITS} qubits, got {h.n_qubits}"
        )
    dim = 1 << h.n_qubits
    mat = np.zeros((dim, dim), dtype=np.complex128)
    for term in h.terms:
        mat += term.coeff * _dense_word(term.word)
    if not np.allclose(mat, mat.conj().T, atol=1e-12):
        raise RuntimeError("internal error: assembled Hamiltonian is not Hermitian")
    return mat


@lru_cache(maxsize=8)
def _dense_eig(h: Hamiltonian) -> tuple[np.ndarray, np.ndarray]:
    evals, evecs = np.linalg.eigh(dense_hamiltonian(h))
    evals.setflags(write=False)
    evecs.setflags(write=False)
    return evals, evecs


def exact_evolve(h: Hamiltonian, t: float, psi: StateVector) -> StateVector:
    """Return ``exp(-i H t)|psi>`` from a dense Hermitian eigendecomposition."""
    _check_register(h.n_qubits, psi)
    if not math.isfinite(t):
        raise ValueError(f"evolution time must be finite, got {t}")
    evals, evecs = _dense_eig(h)
    out = evecs @ (np.exp(-1j * evals * t) * (evecs.conj().T @ psi.amps))
    return StateVector(psi.n_qubits, out)
