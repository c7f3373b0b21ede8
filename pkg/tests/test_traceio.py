import json

import numpy as np
import pytest

import adaptivepf as apf
from adaptivepf import (
    EvolutionConfig,
    TfimSpec,
    adaptive_evolve,
    basis_state,
    gen_tfim,
    read_trace,
    trace_to_csv,
    write_trace,
)
from adaptivepf.traceio import document_to_trace, trace_to_document


@pytest.fixture(scope="module")
def small_trace():
    h = gen_tfim(TfimSpec(2, 0))
    cfg = EvolutionConfig(total_time=0.1, delta_cut=1e-3, dt=0.02, record_fidelity=True)
    return adaptive_evolve(h, basis_state(2, "01"), cfg)


def assert_traces_equal(a, b):
    assert a.config == b.config
    assert len(a.records) == len(b.records)
    for ra, rb in zip(a.records, b.records):
        assert ra == rb
    fa, fb = a.final_ansatz, b.final_ansatz
    assert fa.n_qubits == fb.n_qubits
    assert fa.words == fb.words
    assert np.array_equal(fa.params, fb.params)


def test_document_round_trip_is_bit_exact(small_trace):
    doc = trace_to_document(small_trace)
    again = trace_to_document(document_to_trace(doc))
    assert again == doc
    assert_traces_equal(document_to_trace(doc), small_trace)


def test_file_round_trip_is_bit_exact(small_trace, tmp_path):
    p = tmp_path / "run.json"
    write_trace(small_trace, p)
    assert_traces_equal(read_trace(p), small_trace)
    # and the serialized text itself is stable under a rewrite
    text1 = p.read_text()
    write_trace(read_trace(p), p)
    assert p.read_text() == text1


def test_fidelity_key_omitted_when_not_recorded(tmp_path):
    h = gen_tfim(TfimSpec(2, 0))
    tr = adaptive_evolve(h, basis_state(2, "01"),
                         EvolutionConfig(total_time=0.04, delta_cut=1e-3, dt=0.02))
    doc = trace_to_document(tr)
    assert all("fidelity" not in row for row in doc["records"])
    back = document_to_trace(doc)
    assert all(r.fidelity is None for r in back.records)


def test_schema_version_is_enforced(small_trace):
    doc = trace_to_document(small_trace)
    doc["schema_version"] = 99
    with pytest.raises(apf.SchemaError):
        document_to_trace(doc)
    doc.pop("schema_version")
    with pytest.raises(apf.SchemaError):
        document_to_trace(doc)


def test_malformed_documents_are_parse_errors(small_trace):
    doc = trace_to_document(small_trace)
    broken = json.loads(json.dumps(doc))
    del broken["records"][0]["delta"]
    with pytest.raises(apf.ParseError):
        document_to_trace(broken)
    broken = json.loads(json.dumps(doc))
    del broken["final_ansatz"]
    with pytest.raises(apf.ParseError):
        document_to_trace(broken)
    broken = json.loads(json.dumps(doc))
    broken["config"]["bogus_knob"] = 1
    with pytest.raises(apf.ParseError):
        document_to_trace(broken)


def test_invalid_json_file_is_a_parse_error(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(apf.ParseError):
        read_trace(p)


def test_csv_projection(small_trace, tmp_path):
    text = trace_to_csv(small_trace)
    lines = text.splitlines()
    assert lines[0] == "t,delta,delta_after,ansatz_size,cnot_count,fidelity"
    assert len(lines) == 1 + len(small_trace.records)
    first = lines[1].split(",")
    assert float(first[0]) == small_trace.records[0].t
    assert float(first[1]) == small_trace.records[0].delta
    # write_trace can emit the CSV alongside the JSON
    jp, cp = tmp_path / "t.json", tmp_path / "t.csv"
    write_trace(small_trace, jp, csv_path=cp)
    assert cp.read_text() == text


def test_csv_fidelity_cell_empty_when_absent():
    h = gen_tfim(TfimSpec(2, 0))
    tr = adaptive_evolve(h, basis_state(2, "01"),
                         EvolutionConfig(total_time=0.04, delta_cut=1e-3, dt=0.02))
    for line in trace_to_csv(tr).splitlines()[1:]:
        assert line.endswith(",")
