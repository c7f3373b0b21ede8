import numpy as np
import pytest

import adaptivepf as apf
from adaptivepf import (
    Hamiltonian,
    PauliTerm,
    TfimSpec,
    cnot_cost,
    format_hamiltonian,
    gen_tfim,
    parse_hamiltonian_file,
    parse_word,
)


# --------------------------------------------------------------- generator

def test_gen_tfim_structure():
    h = gen_tfim(TfimSpec(6, 1))
    assert h.num_terms == 21  # 15 couplings + 6 fields
    assert all(t.word.weight == 2 for t in h.terms[:15])
    assert all(t.word.weight == 1 for t in h.terms[15:])
    assert all(t.coeff > 0 for t in h.terms)
    assert sum(t.coeff for t in h.terms) == pytest.approx(6.0, abs=1e-12)


def test_gen_tfim_deterministic_and_frozen():
    a, b = gen_tfim(TfimSpec(6, 1)), gen_tfim(TfimSpec(6, 1))
    assert a.terms == b.terms
    # regression pin on the documented draw order (couplings in (i, j)-lex
    # order, then fields ascending, one batch draw, rescaled afterwards)
    assert str(a.terms[0].word) == "ZZIIII"
    assert a.terms[0].coeff == 0.3063545283371766
    assert a.terms[1].coeff == 0.5689069068937198
    assert str(a.terms[-1].word) == "IIIIIX"
    assert a.terms[-1].coeff == 0.4491361917329797


def test_gen_tfim_tiny_frozen():
    h = gen_tfim(TfimSpec(2, 0))
    assert [(t.coeff, str(t.word)) for t in h.terms] == [
        (4.032585954832634, "ZZ"),
        (1.7080118543701166, "XI"),
        (0.25940219079724885, "IX"),
    ]


def test_gen_tfim_seeds_differ():
    assert gen_tfim(TfimSpec(4, 1)).coeffs != gen_tfim(TfimSpec(4, 2)).coeffs


def test_gen_tfim_custom_sum():
    h = gen_tfim(TfimSpec(5, 3, coeff_sum=2.5))
    assert sum(t.coeff for t in h.terms) == pytest.approx(2.5, abs=1e-12)


def test_tfim_spec_validation():
    with pytest.raises(ValueError):
        TfimSpec(1, 0)
    with pytest.raises(ValueError):
        TfimSpec(3, -1)
    with pytest.raises(ValueError):
        TfimSpec(3, 2**64)
    with pytest.raises(ValueError):
        TfimSpec(3, 0, coeff_sum=0.0)


# ------------------------------------------------------------------- files

def test_format_parse_round_trip_is_exact():
    h = gen_tfim(TfimSpec(4, 7))
    again = parse_hamiltonian_file(format_hamiltonian(h))
    assert again.n_qubits == h.n_qubits
    assert again.terms == h.terms  # bit-exact through repr round-trip


def test_parse_handles_comments_and_blank_lines():
    text = "# a TFIM rough cut\n\n2\n0.5 ZZ\n# field next\n0.25 XI\n"
    h = parse_hamiltonian_file(text)
    assert h.num_terms == 2
    assert h.coeffs == pytest.approx([0.5, 0.25])


def test_parse_merges_duplicate_words():
    h = parse_hamiltonian_file("1\n0.5 Z\n0.25 Z\n")
    assert h.num_terms == 1
    assert h.terms[0].coeff == pytest.approx(0.75)


def test_parse_errors_carry_line_numbers():
    with pytest.raises(apf.ParseError, match="line 1"):
        parse_hamiltonian_file("two\n0.5 ZZ\n")
    with pytest.raises(apf.ParseError, match="line 2"):
        parse_hamiltonian_file("2\n0.5x ZZ\n")
    with pytest.raises(apf.ParseError, match="line 3"):
        parse_hamiltonian_file("2\n0.5 ZZ\n0.25 QQ\n")
    with pytest.raises(apf.ParseError, match="line 3"):
        parse_hamiltonian_file("2\n0.5 ZZ\n0.25 X\n")  # wrong word length
    with pytest.raises(apf.ParseError, match="line 2"):
        parse_hamiltonian_file("2\nnan ZZ\n")
    with pytest.raises(apf.ParseError):
        parse_hamiltonian_file("# nothing\n")
    with pytest.raises(apf.ParseError):
        parse_hamiltonian_file("3\n")


def test_save_load_round_trip(tmp_path):
    h = gen_tfim(TfimSpec(3, 11))
    path = tmp_path / "tfim.txt"
    apf.save_hamiltonian(h, path, comment="three spins")
    text = path.read_text()
    assert text.startswith("# three spins\n")
    assert apf.load_hamiltonian(path).terms == h.terms


# ------------------------------------------------------------------- costs

def test_cnot_cost_staircase_convention():
    assert cnot_cost(parse_word("III", 3)) == 0
    assert cnot_cost(parse_word("IXI", 3)) == 0  # single-qubit rotation
    assert cnot_cost(parse_word("ZZI", 3)) == 2
    assert cnot_cost(parse_word("XYZZ", 4)) == 6


def test_ansatz_cnot_count_sums_ops():
    ans = apf.Ansatz(
        3,
        (
            (parse_word("ZZI", 3), 0.1),
            (parse_word("IXI", 3), 0.2),
            (parse_word("ZZI", 3), 0.3),  # repeats cost again
        ),
    )
    assert apf.ansatz_cnot_count(ans) == 4
