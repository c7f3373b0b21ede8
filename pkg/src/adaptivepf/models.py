"""Model Hamiltonians, a plain-text Hamiltonian file format, and gate costs.

The file format is line oriented: ``#`` starts a comment, the first
non-comment line gives the qubit count, and every following line is
``<coeff> <IXYZ word>``.  Serialization uses ``repr`` floats, so a
parse -> format -> parse round trip is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING, Union

import numpy as np

from .errors import ParseError
from .pauli import Hamiltonian, PauliWord, parse_word

if TYPE_CHECKING:  # pragma: no cover
    from .adaptive import Ansatz

DEFAULT_COEFF_SUM = 6.0


@dataclass(frozen=True)
class TfimSpec:
    """Parameters of a random all-to-all transverse-field Ising instance."""

    n_spins: int
    seed: int
    coeff_sum: float = DEFAULT_COEFF_SUM

    def __post_init__(self):
        if self.n_spins < 2:
            raise ValueError(f"n_spins must be >= 2, got {self.n_spins}")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        if not math.isfinite(self.coeff_sum) or self.coeff_sum <= 0:
            raise ValueError(f"coeff_sum must be positive, got {self.coeff_sum}")


def gen_tfim(spec: TfimSpec) -> Hamiltonian:
    """Random Ising Hamiltonian ``sum_{i>j} w_ij Z_i Z_j + sum_k h_k X_k``.

    All weights are uniform on [0, 1) from a PCG64 generator seeded with
    ``spec.seed``: one batch of draws covering the couplings in lexicographic
    (i, j) order (i > j) followed by the fields in ascending k, then rescaled
    so the coefficients sum to ``spec.coeff_sum``.  Term order matches draw
    order (ZZ couplings first, then X fields), and identical specs produce
    bit-identical Hamiltonians.
    """
    n = spec.n_spins
    pairs = [(i, j) for i in range(1, n) for j in range(i)]
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    draws = rng.random(len(pairs) + n)
    coeffs = draws * (spec.coeff_sum / draws.sum())
    terms = [
        (float(c), PauliWord(n, 0, (1 << i) | (1 << j)))
        for (i, j), c in zip(pairs, coeffs[: len(pairs)])
    ]
    terms += [
        (float(c), PauliWord(n, 1 << k, 0)) for k, c in enumerate(coeffs[len(pairs):])
    ]
    return Hamiltonian.from_terms(n, terms)


def parse_hamiltonian_file(text: str) -> Hamiltonian:
    """Parse the plain-text Hamiltonian format described in the module docstring.

    Duplicate words are merged; an empty term list is rejected.  Errors carry
    1-based line numbers.
    """
    n_qubits = None
    terms: list[tuple[float, PauliWord]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if n_qubits is None:
            try:
                n_qubits = int(line)
            except ValueError:
                raise ParseError(f"line {lineno}: expected qubit count, got {line!r}") from None
            if n_qubits < 1:
                raise ParseError(f"line {lineno}: qubit count must be >= 1, got {n_qubits}")
            continue
        fields = line.split()
        if len(fields) != 2:
            raise ParseError(
                f"line {lineno}: expected '<coeff> <word>', got {len(fields)} fields"
            )
        try:
            coeff = float(fields[0])
        except ValueError:
            raise ParseError(f"line {lineno}: bad coefficient {fields[0]!r}") from None
        if not math.isfinite(coeff):
            raise ParseError(f"line {lineno}: non-finite coefficient {fields[0]!r}")
        try:
            word = parse_word(fields[1], n_qubits)
        except ParseError as exc:
            raise ParseError(f"line {lineno}: {exc}") from None
        terms.append((coeff, word))
    if n_qubits is None:
        raise ParseError("no qubit count found")
    if not terms:
        raise ParseError("no Hamiltonian terms found")
    try:
        return Hamiltonian.from_terms(n_qubits, terms)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def format_hamiltonian(h: Hamiltonian, comment: str = "") -> str:
    """Render ``h`` in the plain-text format; floats use shortest round-trip repr."""
    lines = []
    if comment:
        lines += [f"# {line}" for line in comment.splitlines()]
    lines.append(str(h.n_qubits))
    lines += [f"{t.coeff!r} {t.word}" for t in h.terms]
    return "\n".join(lines) + "\n"


def load_hamiltonian(path: Union[str, Path]) -> Hamiltonian:
    return parse_hamiltonian_file(Path(path).read_text())


def save_hamiltonian(h: Hamiltonian, path: Union[str, Path], comment: str = "") -> None:
    Path(path).write_text(format_hamiltonian(h, comment))


def cnot_cost(word: PauliWord) -> int:
    """CNOTs of the standard staircase exponential: 2(w-1) for weight w >= 2."""
    w = word.weight
    return 0 if w <= 1 else 2 * (w - 1)


def ansatz_cnot_count(ansatz: "Ansatz") -> int:
    """Total staircase CNOT count of one circuit pass (each rotation once)."""
    return sum(cnot_cost(word) for word in ansatz.words)
