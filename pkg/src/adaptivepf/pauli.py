"""Algebra of n-qubit Pauli words and real-weighted Pauli-sum Hamiltonians.

Words are stored in symplectic form as two integer bit masks: bit ``q`` of
``x_mask`` is set iff qubit ``q`` carries X or Y, and bit ``q`` of ``z_mask``
is set iff it carries Z or Y.  Products and commutation checks then reduce to
XORs and popcounts, and words hash cheaply for dict-keyed deduplication.

The matrix convention is fixed: a word equals the tensor product of its
single-qubit letters, with qubit 0 addressed by the *leftmost* character of
the string form and by the *least significant* bit of a basis index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Union

from .errors import DimensionError, ParseError

# Merged terms whose coefficient magnitude falls below this are dropped.
COEFF_CUTOFF = 1e-12

_LETTERS = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}
_PHASES = (1 + 0j, 1j, -1 + 0j, -1j)


@dataclass(frozen=True)
class PauliWord:
    """Tensor product of single-qubit Pauli operators in (x, z) mask form."""

    n_qubits: int
    x_mask: int
    z_mask: int

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError(f"n_qubits must be >= 1, got {self.n_qubits}")
        full = (1 << self.n_qubits) - 1
        if not 0 <= self.x_mask <= full:
            raise ValueError(f"x_mask {self.x_mask:#x} does not fit {self.n_qubits} qubits")
        if not 0 <= self.z_mask <= full:
            raise ValueError(f"z_mask {self.z_mask:#x} does not fit {self.n_qubits} qubits")

    @classmethod
    def identity(cls, n_qubits: int) -> "PauliWord":
        return cls(n_qubits, 0, 0)

    @property
    def weight(self) -> int:
        """Number of non-identity sites."""
        return (self.x_mask | self.z_mask).bit_count()

    @property
    def is_identity(self) -> bool:
        return self.x_mask == 0 and self.z_mask == 0

    def __str__(self) -> str:
        return "".join(
            _LETTERS[(self.x_mask >> q) & 1, (self.z_mask >> q) & 1]
            for q in range(self.n_qubits)
        )


def parse_word(s: str, n_qubits: int) -> PauliWord:
    """Parse a length-``n_qubits`` string over IXYZ; character q addresses qubit q."""
    if len(s) != n_qubits:
        raise ParseError(
            f"Pauli string {s!r} has length {len(s)}, expected {n_qubits}"
        )
    x = z = 0
    for pos, ch in enumerate(s):
        if ch not in "IXYZ":
            raise ParseError(f"illegal character {ch!r} at position {pos} of {s!r}")
        if ch in "XY":
            x |= 1 << pos
        if ch in "YZ":
            z |= 1 << pos
    return PauliWord(n_qubits, x, z)


def _check_same_qubits(p: PauliWord, q: PauliWord) -> None:
    if p.n_qubits != q.n_qubits:
        raise DimensionError(
            f"words act on different registers: {p.n_qubits} vs {q.n_qubits} qubits"
        )


def multiply(p: PauliWord, q: PauliWord) -> tuple[complex, PauliWord]:
    """Operator product ``p @ q`` as ``(phase, word)`` with phase in {1, i, -1, -i}.

    Every word factors as ``i**popcount(x & z) * X^x Z^z``, so the product
    phase comes from commuting the Z block of ``p`` through the X block of
    ``q`` plus the bookkeeping factors of the three words involved.
    """
    _check_same_qubits(p, q)
    x = p.x_mask ^ q.x_mask
    z = p.z_mask ^ q.z_mask
    exponent = (
        (p.x_mask & p.z_mask).bit_count()
        + (q.x_mask & q.z_mask).bit_count()
        + 2 * (p.z_mask & q.x_mask).bit_count()
        - (x & z).bit_count()
    ) % 4
    return _PHASES[exponent], PauliWord(p.n_qubits, x, z)


def commutes(p: PauliWord, q: PauliWord) -> bool:
    """True iff ``p`` and ``q`` commute (symplectic inner product is even)."""
    _check_same_qubits(p, q)
    anti = (p.x_mask & q.z_mask).bit_count() + (p.z_mask & q.x_mask).bit_count()
    return anti % 2 == 0


@dataclass(frozen=True)
class PauliTerm:
    """A single real-weighted Pauli word."""

    coeff: float
    word: PauliWord

    def __post_init__(self):
        if not isinstance(self.coeff, (int, float)) or isinstance(self.coeff, bool):
            raise TypeError(f"coefficient must be a real number, got {self.coeff!r}")
        object.__setattr__(self, "coeff", float(self.coeff))
        if not math.isfinite(self.coeff) or self.coeff == 0.0:
            raise ValueError(f"coefficient must be finite and nonzero, got {self.coeff}")


@dataclass(frozen=True)
class Hamiltonian:
    """Real-weighted sum of distinct Pauli words, in first-appearance order."""

    n_qubits: int
    terms: tuple[PauliTerm, ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if not self.terms:
            raise ValueError("Hamiltonian must contain at least one term")
        for t in self.terms:
            if t.word.n_qubits != self.n_qubits:
                raise DimensionError(
                    f"term {t.word} acts on {t.word.n_qubits} qubits, expected {self.n_qubits}"
                )
        if len({t.word for t in self.terms}) != len(self.terms):
            raise ValueError("duplicate words; use Hamiltonian.from_terms to merge them")

    @classmethod
    def from_terms(
        cls,
        n_qubits: int,
        terms: Iterable[Union[PauliTerm, tuple[float, PauliWord]]],
    ) -> "Hamiltonian":
        """Build a Hamiltonian, merging duplicate words by summing coefficients.

        Merged terms with ``|coeff| < COEFF_CUTOFF`` are dropped.  Term order is
        the order of first appearance.
        """
        merged: dict[PauliWord, float] = {}
        for item in terms:
            if isinstance(item, PauliTerm):
                coeff, word = item.coeff, item.word
            else:
                coeff, word = item
            if not math.isfinite(coeff):
                raise ValueError(f"non-finite coefficient {coeff} for word {word}")
            merged[word] = merged.get(word, 0.0) + float(coeff)
        kept = tuple(
            PauliTerm(c, w) for w, c in merged.items() if abs(c) >= COEFF_CUTOFF
        )
        if not kept:
            raise ValueError("Hamiltonian has no terms left after merging")
        return cls(n_qubits, kept)

    @property
    def num_terms(self) -> int:
        return len(self.terms)

    @property
    def words(self) -> tuple[PauliWord, ...]:
        return tuple(t.word for t in self.terms)

    @property
    def coeffs(self) -> tuple[float, ...]:
        return tuple(t.coeff for t in self.terms)

    @property
    def weight_sum(self) -> float:
        """Sum of coefficient magnitudes."""
        return sum(abs(t.coeff) for t in self.terms)

    def scaled(self, factor: float) -> "Hamiltonian":
        """Same words with every coefficient multiplied by ``factor``."""
        if not math.isfinite(factor) or factor == 0.0:
            raise ValueError(f"scale factor must be finite and nonzero, got {factor}")
        return Hamiltonian(
            self.n_qubits, tuple(PauliTerm(factor * t.coeff, t.word) for t in self.terms)
        )

    def __len__(self) -> int:
        return len(self.terms)
