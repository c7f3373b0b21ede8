"""Time evolution drivers: adaptive product-formula and first-order Trotter.

The adaptive driver keeps a single growing circuit for the whole run.  Every
step it re-optimizes all rotation parameters jointly (solve ``A lam = C``),
grows the circuit only when the projection residual exceeds ``delta_cut``
(growth target: half the cut), then advances every parameter by
``lam * dt``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .adaptive import (
    UPDATE_RTOL,
    Ansatz,
    SolveResult,
    apply_ansatz,
    compute_delta,
    grow_ansatz,
)
from .errors import CapabilityError, ConfigError, DimensionError
from .models import ansatz_cnot_count, cnot_cost

#: Largest rotation angle (radians) a single Euler update may apply to any one
#: parameter.  The first-order residual is blind to second-order error, so a
#: near-degenerate tangent direction can demand coefficients in the hundreds
#: (radians per step) while reporting delta = 0; applying such a step destroys
#: the state.  When that happens the driver re-solves with a coarser cutoff,
#: treating the truncated direction's motion as residual for growth to
#: recapture with fresh, well-conditioned operators.
MAX_STEP_ROTATION = 0.5

_TRUST_LADDER = (UPDATE_RTOL, 1e-6, 1e-4, 1e-2)
from .pauli import Hamiltonian, PauliWord
from .statevector import (
    EXACT_EVOLVE_MAX_QUBITS,
    StateVector,
    _rotate,
    exact_evolve,
    inner,
)


@dataclass(frozen=True)
class EvolutionConfig:
    """Fixed-step adaptive run setup.

    ``max_growths_per_step`` caps circuit appends within one step; ``None``
    means one full pass over the Hamiltonian words (the natural bound).
    """

    total_time: float
    delta_cut: float
    dt: float = 5e-3
    record_fidelity: bool = False
    max_growths_per_step: Optional[int] = None

    def __post_init__(self):
        if not math.isfinite(self.total_time) or self.total_time <= 0:
            raise ConfigError(f"total_time must be positive, got {self.total_time}")
        if not math.isfinite(self.dt) or self.dt <= 0:
            raise ConfigError(f"dt must be positive, got {self.dt}")
        if self.dt > self.total_time:
            raise ConfigError(f"dt={self.dt} exceeds total_time={self.total_time}")
        if not math.isfinite(self.delta_cut) or self.delta_cut <= 0:
            raise ConfigError(f"delta_cut must be positive, got {self.delta_cut}")
        ratio = self.total_time / self.dt
        if abs(ratio - round(ratio)) > 1e-9:
            raise ConfigError(
                f"total_time/dt = {ratio!r} is not an integer step count"
            )
        if self.max_growths_per_step is not None and self.max_growths_per_step < 1:
            raise ConfigError(
                f"max_growths_per_step must be >= 1, got {self.max_growths_per_step}"
            )

    @property
    def num_steps(self) -> int:
        return round(self.total_time / self.dt)


@dataclass(frozen=True)
class StepRecord:
    """One row of an adaptive run: residuals before/after growth plus costs."""

    t: float
    delta: float
    delta_after: float
    ansatz_size: int
    cnot_count: int
    fidelity: Optional[float] = None


@dataclass(frozen=True)
class EvolutionTrace:
    """Config echo, per-step records covering t = 0 .. total_time, final circuit."""

    config: EvolutionConfig
    records: tuple[StepRecord, ...]
    final_ansatz: Ansatz

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))


def fidelity(a: StateVector, b: StateVector) -> float:
    """Squared overlap |<a|b>|^2."""
    return abs(inner(a, b)) ** 2


def adaptive_single_step(
    h: Hamiltonian,
    psi: StateVector,
    dt: float,
    delta_cut: float,
) -> tuple[list[tuple[PauliWord, float]], StateVector, SolveResult]:
    """Build a fresh one-step circuit for the current state and apply it.

    Grows an empty ansatz on ``psi`` until the residual is at most
    ``delta_cut``, then applies ``prod_j exp(-i O_j lam_j dt)``.  Returns the
    chosen (word, lam) pairs in application order, the stepped state, and the
    final solve result.
    """
    if not math.isfinite(dt) or dt <= 0:
        raise ConfigError(f"dt must be positive, got {dt}")
    grown, result, _ = grow_ansatz(Ansatz(h.n_qubits), h, psi, delta_cut)
    ops = [(word, float(lam)) for (word, _), lam in zip(grown.ops, result.lam)]
    amps = psi.amps
    for word, lam in ops:
        amps = _rotate(word, lam * dt, amps)
    return ops, StateVector(psi.n_qubits, amps), result


def adaptive_evolve(
    h: Hamiltonian,
    psi0: StateVector,
    config: EvolutionConfig,
    on_state: Optional[Callable[[int, float, StateVector], None]] = None,
) -> EvolutionTrace:
    """Evolve ``psi0`` for ``config.total_time`` with one jointly updated circuit.

    Records one row per step boundary t = 0, dt, ..., total_time.  At t = 0
    the circuit is empty, so the residual equals <H^2> and growth triggers
    immediately.  The final boundary is treated like any other: its residual
    is re-evaluated and the circuit grown if needed, so every recorded
    ``delta_after`` respects the cut.

    If the solved coefficients would rotate any parameter by more than
    ``MAX_STEP_ROTATION`` radians in one step (a symptom of a near-degenerate
    tangent basis), the step is re-solved with a coarser cutoff and the
    stranded motion is handed to growth; ``ArithmeticError`` is raised only if
    no cutoff yields a sane update.

    ``on_state`` (step index, time, prepared state) is invoked at every
    boundary; fidelities are against the dense exact evolver and require
    ``n_qubits <= EXACT_EVOLVE_MAX_QUBITS``.
    """
    if h.n_qubits != psi0.n_qubits:
        raise DimensionError(f"H acts on {h.n_qubits} qubits but state has {psi0.n_qubits}")
    if config.record_fidelity and h.n_qubits > EXACT_EVOLVE_MAX_QUBITS:
        raise CapabilityError(
            f"fidelity recording needs n_qubits <= {EXACT_EVOLVE_MAX_QUBITS}, got {h.n_qubits}"
        )
    steps = config.num_steps
    ansatz = Ansatz(h.n_qubits)
    records = []
    for i in range(steps + 1):
        t = i * config.dt
        # Everything in this step -- growth trigger, growth scoring, and the
        # applied coefficients -- runs at one shared cutoff, so the residual
        # being controlled is the residual of the update actually performed.
        # Near-null tangent directions would otherwise inject huge rotation
        # angles whose second-order error the quantifier cannot see.  The
        # cutoff starts at UPDATE_RTOL and is coarsened rung by rung whenever
        # the proposed update exceeds MAX_STEP_ROTATION; growth then sees the
        # truncated directions' motion as residual and recaptures it.
        rung = 0
        while True:
            result = compute_delta(ansatz, h, psi0, rtol=_TRUST_LADDER[rung])
            if _kicks(result, config.dt):
                rung += 1
                if rung == len(_TRUST_LADDER):
                    raise ArithmeticError(
                        f"coefficient blow-up at t={t} that no cutoff tames"
                    )
                continue
            delta_before = result.delta
            if delta_before > config.delta_cut:
                ansatz, result, _ = grow_ansatz(
                    ansatz, h, psi0, config.delta_cut / 2.0,
                    max_iterations=config.max_growths_per_step,
                    rtol=_TRUST_LADDER[rung],
                )
                if _kicks(result, config.dt):
                    rung += 1
                    if rung == len(_TRUST_LADDER):
                        raise ArithmeticError(
                            f"coefficient blow-up at t={t} that no cutoff tames"
                        )
                    continue
            break
        if not np.isfinite(result.lam).all():
            raise ArithmeticError(f"non-finite coefficients at t={t}")
        state = None
        if config.record_fidelity or on_state is not None:
            state = apply_ansatz(ansatz, psi0)
        fid = None
        if config.record_fidelity:
            fid = fidelity(exact_evolve(h, t, psi0), state)
        if on_state is not None:
            on_state(i, t, state)
        records.append(
            StepRecord(t, delta_before, result.delta, len(ansatz),
                       ansatz_cnot_count(ansatz), fid)
        )
        if i < steps:
            ansatz = ansatz.with_params(ansatz.params + result.lam * config.dt)
    return EvolutionTrace(config, tuple(records), ansatz)


def _kicks(result: SolveResult, dt: float) -> bool:
    if result.lam.size == 0:
        return False
    return float(np.max(np.abs(result.lam))) * dt > MAX_STEP_ROTATION


def trotter_evolve(
    h: Hamiltonian,
    psi0: StateVector,
    total_time: float,
    steps: int,
) -> tuple[StateVector, int]:
    """First-order product formula: ``steps`` sweeps of exp(-i a_j P_j dt).

    Terms are applied in Hamiltonian order within each sweep.  Returns the
    final state and the staircase CNOT count of the full circuit.
    """
    if h.n_qubits != psi0.n_qubits:
        raise DimensionError(f"H acts on {h.n_qubits} qubits but state has {psi0.n_qubits}")
    if steps < 1:
        raise ConfigError(f"steps must be >= 1, got {steps}")
    if not math.isfinite(total_time):
        raise ValueError(f"total_time must be finite, got {total_time}")
    dt = total_time / steps
    amps = psi0.amps
    for _ in range(steps):
        for term in h.terms:
            amps = _rotate(term.word, term.coeff * dt, amps)
    cnots = steps * sum(cnot_cost(t.word) for t in h.terms)
    return StateVector(psi0.n_qubits, amps), cnots
