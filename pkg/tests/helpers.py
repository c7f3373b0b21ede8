"""Seeded random factories shared across test modules.

The draw order inside each factory is part of the test contract: several
tests freeze a generator seed and expect the exact instance the factory
produced when the expected values were computed.  Don't reorder the draws.
"""
import numpy as np

import adaptivepf as apf

LETTERS = "IXYZ"


def random_letters(rng, n, allow_identity=False):
    while True:
        s = "".join(rng.choice(list(LETTERS), size=n))
        if allow_identity or set(s) != {"I"}:
            return s


def random_state(rng, n):
    amps = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return apf.StateVector.normalized(n, amps)


def random_hamiltonian(rng, n, nterms):
    words = set()
    while len(words) < nterms:
        words.add(random_letters(rng, n))
    terms = [
        apf.PauliTerm(float(rng.uniform(-1, 1)), apf.parse_word(w, n))
        for w in sorted(words)
    ]
    return apf.Hamiltonian.from_terms(n, terms)


def random_ansatz(rng, n, k, spread=0.3):
    words = [apf.parse_word(random_letters(rng, n), n) for _ in range(k)]
    params = rng.uniform(-spread, spread, size=k)
    return apf.Ansatz(n, tuple((w, float(p)) for w, p in zip(words, params)))


def minus_state(n):
    """|-> on every qubit: the strong-transverse-field ground state."""
    single = np.array([1.0, -1.0]) / np.sqrt(2.0)
    amps = single
    for _ in range(n - 1):
        amps = np.kron(single, amps)
    return apf.StateVector(n, amps.astype(complex))


def ham_pairs(h):
    """(coeff, letters) view of a Hamiltonian for the dense oracle."""
    return [(t.coeff, str(t.word)) for t in h.terms]
