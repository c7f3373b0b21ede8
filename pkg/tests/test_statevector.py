import itertools

import numpy as np
import pytest

import adaptivepf as apf
from adaptivepf import StateVector, apply_pauli, apply_pauli_rotation, basis_state, parse_word

import oracle
from helpers import ham_pairs, random_hamiltonian, random_state


def test_basis_state_bit_convention():
    # character q of the bitstring is qubit q, and qubit q is bit q of the index
    psi = basis_state(2, "10")
    assert psi.amps[1] == 1.0
    assert basis_state(2, "01").amps[2] == 1.0
    assert np.array_equal(basis_state(3, 5).amps, basis_state(3, "101").amps)


def test_basis_state_errors():
    with pytest.raises(apf.ParseError):
        basis_state(2, "012")
    with pytest.raises(apf.ParseError):
        basis_state(2, "2x")
    with pytest.raises(ValueError):
        basis_state(2, 4)


def test_state_validation():
    with pytest.raises(ValueError):
        StateVector(1, np.array([1.0, 1.0]))  # not normalized
    with pytest.raises(apf.DimensionError):
        StateVector(2, np.array([1.0, 0.0]))
    psi = basis_state(1, 0)
    with pytest.raises(ValueError):
        psi.amps[0] = 0.0  # amplitudes are read-only


def test_normalized_classmethod():
    psi = StateVector.normalized(1, np.array([3.0, 4.0]))
    assert psi.amps == pytest.approx(np.array([0.6, 0.8]))
    with pytest.raises(ValueError):
        StateVector.normalized(1, np.zeros(2))


def test_pauli_action_hand_example():
    # Y on qubit 0 of |00> gives i|10>
    out = apply_pauli(parse_word("YI", 2), basis_state(2, "00"))
    expected = np.zeros(4, dtype=complex)
    expected[1] = 1j
    assert np.allclose(out.amps, expected, atol=1e-15)


def test_pauli_action_matches_dense_exhaustive_two_qubits():
    rng = np.random.default_rng(7)
    psi = random_state(rng, 2)
    for letters in itertools.product("IXYZ", repeat=2):
        s = "".join(letters)
        out = apply_pauli(parse_word(s, 2), psi)
        assert np.allclose(out.amps, oracle.word_matrix(s) @ psi.amps, atol=1e-12), s


def test_pauli_action_matches_dense_random_four_qubits():
    rng = np.random.default_rng(11)
    for _ in range(25):
        s = "".join(rng.choice(list("IXYZ"), size=4))
        psi = random_state(rng, 4)
        out = apply_pauli(parse_word(s, 4), psi)
        assert np.allclose(out.amps, oracle.word_matrix(s) @ psi.amps, atol=1e-12)


def test_pauli_is_involution():
    rng = np.random.default_rng(13)
    psi = random_state(rng, 3)
    w = parse_word("XYZ", 3)
    assert np.allclose(apply_pauli(w, apply_pauli(w, psi)).amps, psi.amps, atol=1e-14)


def test_rotation_matches_dense():
    rng = np.random.default_rng(17)
    for _ in range(20):
        n = int(rng.integers(1, 5))
        s = "".join(rng.choice(list("IXYZ"), size=n))
        theta = float(rng.uniform(-3, 3))
        psi = random_state(rng, n)
        out = apply_pauli_rotation(parse_word(s, n), theta, psi)
        assert np.allclose(out.amps, oracle.rotation_matrix(s, theta) @ psi.amps, atol=1e-10)


def test_rotation_inverse():
    rng = np.random.default_rng(19)
    psi = random_state(rng, 3)
    w = parse_word("ZXY", 3)
    back = apply_pauli_rotation(w, -0.7, apply_pauli_rotation(w, 0.7, psi))
    assert np.linalg.norm(back.amps - psi.amps) < 1e-10


def test_rotation_zero_angle_is_identity():
    psi = basis_state(2, "01")
    out = apply_pauli_rotation(parse_word("XY", 2), 0.0, psi)
    assert np.array_equal(out.amps, psi.amps)


def test_apply_hamiltonian_matches_dense():
    rng = np.random.default_rng(23)
    h = random_hamiltonian(rng, 3, 5)
    psi = random_state(rng, 3)
    raw = apf.apply_hamiltonian(h, psi)
    assert np.allclose(raw, oracle.ham_matrix(ham_pairs(h)) @ psi.amps, atol=1e-12)


def test_inner_conjugates_first_argument():
    rng = np.random.default_rng(29)
    a, b = random_state(rng, 2), random_state(rng, 2)
    ab = apf.inner(a, b)
    assert ab == pytest.approx(np.vdot(a.amps, b.amps))
    assert apf.inner(b, a) == pytest.approx(np.conj(ab))
    # plain arrays are accepted too
    assert apf.inner(a.amps, b.amps) == pytest.approx(ab)
    with pytest.raises(apf.DimensionError):
        apf.inner(a, random_state(rng, 3))


def test_expectations_hand_example():
    h = apf.Hamiltonian.from_terms(
        1, [apf.PauliTerm(0.5, parse_word("Z", 1)), apf.PauliTerm(0.3, parse_word("X", 1))]
    )
    eh, eh2 = apf.expect_h_and_h2(h, basis_state(1, 0))
    assert eh == pytest.approx(0.5)
    assert eh2 == pytest.approx(0.34)


def test_expectations_match_dense():
    rng = np.random.default_rng(31)
    h = random_hamiltonian(rng, 3, 6)
    psi = random_state(rng, 3)
    hmat = oracle.ham_matrix(ham_pairs(h))
    eh, eh2 = apf.expect_h_and_h2(h, psi)
    assert eh == pytest.approx(float(np.real(np.vdot(psi.amps, hmat @ psi.amps))), abs=1e-12)
    assert eh2 == pytest.approx(float(np.linalg.norm(hmat @ psi.amps) ** 2), abs=1e-12)


def test_dense_hamiltonian_matches_oracle():
    rng = np.random.default_rng(37)
    h = random_hamiltonian(rng, 3, 7)
    assert np.allclose(apf.dense_hamiltonian(h), oracle.ham_matrix(ham_pairs(h)), atol=1e-12)


# ------------------------------------------------------------ exact evolver

def test_exact_evolve_matches_expm():
    rng = np.random.default_rng(43)
    for n in (2, 3, 4):
        h = random_hamiltonian(rng, n, 5)
        psi = random_state(rng, n)
        hmat = oracle.ham_matrix(ham_pairs(h))
        for t in (0.0, 0.3, 1.0, -0.7):
            out = apf.exact_evolve(h, t, psi)
            assert np.allclose(out.amps, oracle.evolve(hmat, t, psi.amps), atol=1e-9), (n, t)


def test_exact_evolve_semigroup_and_energy():
    rng = np.random.default_rng(47)
    h = random_hamiltonian(rng, 3, 5)
    psi = random_state(rng, 3)
    one = apf.exact_evolve(h, 0.9, psi)
    two = apf.exact_evolve(h, 0.5, apf.exact_evolve(h, 0.4, psi))
    assert np.allclose(one.amps, two.amps, atol=1e-11)
    e0, _ = apf.expect_h_and_h2(h, psi)
    e1, _ = apf.expect_h_and_h2(h, one)
    assert e1 == pytest.approx(e0, abs=1e-11)
    assert np.linalg.norm(one.amps) == pytest.approx(1.0, abs=1e-12)


def test_exact_evolve_qubit_cap():
    n = apf.EXACT_EVOLVE_MAX_QUBITS + 1
    h = apf.Hamiltonian.from_terms(n, [apf.PauliTerm(1.0, parse_word("Z" + "I" * (n - 1), n))])
    amps = np.zeros(2**n, dtype=complex)
    amps[0] = 1.0
    with pytest.raises(apf.CapabilityError):
        apf.exact_evolve(h, 0.1, StateVector(n, amps))
