"""Ground-energy estimation from a real-time-evolution Krylov subspace.

The subspace is spanned by ``exp(+i H n dt)|phi0>`` for n = 0..m.  The sign
is fixed once for all backends: the exact evolver runs with negated time and
the circuit backends (Trotter, adaptive) evolve under ``-H`` forward in time,
so every backend targets the same vectors.  Overlap and Hamiltonian matrices
are projected onto the well-conditioned part of the overlap spectrum
(canonical orthogonalization) before the reduced eigenproblem is solved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .errors import ConfigError, DegenerateSubspaceError, DimensionError
from .evolution import EvolutionConfig, EvolutionTrace, adaptive_evolve, trotter_evolve
from .pauli import Hamiltonian
from .statevector import StateVector, _apply_hamiltonian_raw, exact_evolve


@dataclass(frozen=True)
class KrylovConfig:
    """Subspace size ``m`` (m+1 vectors), time spacing, and overlap cutoff."""

    m: int
    dt_krylov: float
    s_threshold: float = 1e-10

    def __post_init__(self):
        if self.m < 0:
            raise ConfigError(f"m must be >= 0, got {self.m}")
        if not math.isfinite(self.dt_krylov) or self.dt_krylov <= 0:
            raise ConfigError(f"dt_krylov must be positive, got {self.dt_krylov}")
        if not 0.0 < self.s_threshold < 1.0:
            raise ConfigError(
                f"s_threshold must lie in (0, 1), got {self.s_threshold}"
            )


@dataclass(frozen=True)
class ExactBackend:
    """Dense eigendecomposition evolver."""


@dataclass(frozen=True)
class TrotterBackend:
    """First-order product formula with ``steps`` sweeps per dt_krylov interval."""

    steps: int

    def __post_init__(self):
        if self.steps < 1:
            raise ConfigError(f"steps must be >= 1, got {self.steps}")


@dataclass(frozen=True)
class AdaptiveBackend:
    """One continuous adaptive run snapshotted at multiples of dt_krylov.

    ``config.total_time`` must equal ``m * dt_krylov`` and ``dt_krylov`` must
    be an integer multiple of ``config.dt``.
    """

    config: EvolutionConfig


Backend = Union[ExactBackend, TrotterBackend, AdaptiveBackend]


@dataclass(frozen=True)
class KrylovMatrices:
    """Hermitized overlap and Hamiltonian matrices of the subspace vectors."""

    s_matrix: np.ndarray
    h_matrix: np.ndarray

    def __post_init__(self):
        s = np.array(self.s_matrix, dtype=np.complex128, copy=True)
        hm = np.array(self.h_matrix, dtype=np.complex128, copy=True)
        if s.ndim != 2 or s.shape[0] != s.shape[1] or hm.shape != s.shape:
            raise DimensionError(
                f"S and H must be square and congruent, got {s.shape} and {hm.shape}"
            )
        s.setflags(write=False)
        hm.setflags(write=False)
        object.__setattr__(self, "s_matrix", s)
        object.__setattr__(self, "h_matrix", hm)


def build_krylov_basis(
    h: Hamiltonian,
    phi0: StateVector,
    config: KrylovConfig,
    backend: Backend,
) -> tuple[list[StateVector], Optional[EvolutionTrace]]:
    """Subspace vectors ``exp(+i H n dt)|phi0>`` plus, for the adaptive
    backend, the trace of the single growing circuit that prepared them."""
    if h.n_qubits != phi0.n_qubits:
        raise DimensionError(f"H acts on {h.n_qubits} qubits but state has {phi0.n_qubits}")
    if config.m == 0:
        return [phi0], None
    dt = config.dt_krylov
    if isinstance(backend, ExactBackend):
        return [exact_evolve(h, -n * dt, phi0) for n in range(config.m + 1)], None
    reversed_h = h.scaled(-1.0)
    if isinstance(backend, TrotterBackend):
        states = [phi0]
        for _ in range(config.m):
            nxt, _ = trotter_evolve(reversed_h, states[-1], dt, backend.steps)
            states.append(nxt)
        return states, None
    if isinstance(backend, AdaptiveBackend):
        cfg = backend.config
        ratio = dt / cfg.dt
        stride = round(ratio)
        if stride < 1 or abs(ratio - stride) > 1e-9 * max(1.0, ratio):
            raise ConfigError(
                f"dt_krylov={dt} is not an integer multiple of the adaptive dt={cfg.dt}"
            )
        want_total = config.m * dt
        if abs(cfg.total_time - want_total) > 1e-9 * max(1.0, want_total):
            raise ConfigError(
                f"adaptive total_time={cfg.total_time} must equal m*dt_krylov={want_total}"
            )
        snapshots: dict[int, StateVector] = {}

        def keep(i: int, _t: float, state: StateVector) -> None:
            if i % stride == 0:
                snapshots[i // stride] = state

        trace = adaptive_evolve(reversed_h, phi0, cfg, on_state=keep)
        return [snapshots[n] for n in range(config.m + 1)], trace
    raise TypeError(f"unknown backend {backend!r}")


def build_krylov_states(
    h: Hamiltonian,
    phi0: StateVector,
    config: KrylovConfig,
    backend: Backend,
) -> list[StateVector]:
    return build_krylov_basis(h, phi0, config, backend)[0]


def build_krylov_matrices(states: list[StateVector], h: Hamiltonian) -> KrylovMatrices:
    """S_jk = <phi_j|phi_k> and H_jk = <phi_j|H|phi_k>, both hermitized."""
    if not states:
        raise ValueError("need at least one subspace vector")
    n = states[0].n_qubits
    if h.n_qubits != n or any(s.n_qubits != n for s in states):
        raise DimensionError("subspace vectors and H must share one register")
    phi = np.column_stack([s.amps for s in states])
    hphi = np.column_stack([_apply_hamiltonian_raw(h, s.amps) for s in states])
    s_mat = phi.conj().T @ phi
    h_mat = phi.conj().T @ hphi
    return KrylovMatrices((s_mat + s_mat.conj().T) / 2.0, (h_mat + h_mat.conj().T) / 2.0)


def solve_generalized_eig(
    matrices: KrylovMatrices,
    s_threshold: float = 1e-10,
) -> tuple[np.ndarray, int]:
    """Eigenvalues of H restricted to the well-conditioned span of S.

    Overlap eigenpairs below ``s_threshold`` times the largest eigenvalue are
    discarded; the rest define the canonical orthogonalization ``X`` with
    ``X' S X = I``, and the reduced problem ``X' H X`` is solved exactly.
    Returns ascending real eigenvalues and the kept rank.
    """
    if not 0.0 < s_threshold < 1.0:
        raise ConfigError(f"s_threshold must lie in (0, 1), got {s_threshold}")
    evals, evecs = np.linalg.eigh(matrices.s_matrix)
    cutoff = s_threshold * evals[-1]
    keep = evals > cutoff
    if evals[-1] <= 0.0 or not keep.any():
        raise DegenerateSubspaceError(
            f"all overlap eigenvalues fall below {cutoff:.3e}; "
            "the subspace is numerically degenerate (raise s_threshold or shrink m)"
        )
    x = evecs[:, keep] / np.sqrt(evals[keep])
    reduced = x.conj().T @ matrices.h_matrix @ x
    reduced = (reduced + reduced.conj().T) / 2.0
    energies = np.linalg.eigvalsh(reduced)
    return energies, int(np.count_nonzero(keep))


def krylov_ground_energy(
    h: Hamiltonian,
    phi0: StateVector,
    config: KrylovConfig,
    backend: Backend,
) -> tuple[float, Optional[EvolutionTrace]]:
    """Smallest subspace eigenvalue; adaptive backend also returns its trace."""
    states, trace = build_krylov_basis(h, phi0, config, backend)
    matrices = build_krylov_matrices(states, h)
    energies, _ = solve_generalized_eig(matrices, config.s_threshold)
    return float(energies[0]), trace
