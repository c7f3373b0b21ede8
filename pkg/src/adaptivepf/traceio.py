"""Trace serialization: a versioned JSON document plus a flat CSV projection.

JSON is the round-trip format (floats use shortest round-trip repr, so
``read_trace(write_trace(x)) == x``).  The CSV is a lossy per-step table for
plotting and follows RFC 4180 quoting.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Optional, Union

from .adaptive import Ansatz
from .errors import ParseError, SchemaError
from .evolution import EvolutionConfig, EvolutionTrace, StepRecord
from .pauli import parse_word

TRACE_SCHEMA_VERSION = 1

_CSV_COLUMNS = ("t", "delta", "delta_after", "ansatz_size", "cnot_count", "fidelity")


def trace_to_document(trace: EvolutionTrace) -> dict:
    """Plain-dict form of a trace (what the JSON file contains)."""
    records = []
    for rec in trace.records:
        row = {
            "t": rec.t,
            "delta": rec.delta,
            "delta_after": rec.delta_after,
            "ansatz_size": rec.ansatz_size,
            "cnot_count": rec.cnot_count,
        }
        if rec.fidelity is not None:
            row["fidelity"] = rec.fidelity
        records.append(row)
    cfg = trace.config
    return {
        "schema_version": TRACE_SCHEMA_VERSION,
        "config": {
            "total_time": cfg.total_time,
            "delta_cut": cfg.delta_cut,
            "dt": cfg.dt,
            "record_fidelity": cfg.record_fidelity,
            "max_growths_per_step": cfg.max_growths_per_step,
        },
        "records": records,
        "final_ansatz": {
            "n_qubits": trace.final_ansatz.n_qubits,
            "ops": [
                {"word": str(word), "param": param}
                for word, param in trace.final_ansatz.ops
            ],
        },
    }


def document_to_trace(doc: dict) -> EvolutionTrace:
    version = doc.get("schema_version")
    if version != TRACE_SCHEMA_VERSION:
        raise SchemaError(
            f"unsupported trace schema version {version!r}, expected {TRACE_SCHEMA_VERSION}"
        )
    try:
        config = EvolutionConfig(**doc["config"])
        records = tuple(
            StepRecord(
                t=row["t"],
                delta=row["delta"],
                delta_after=row["delta_after"],
                ansatz_size=row["ansatz_size"],
                cnot_count=row["cnot_count"],
                fidelity=row.get("fidelity"),
            )
            for row in doc["records"]
        )
        fa = doc["final_ansatz"]
        n = fa["n_qubits"]
        ansatz = Ansatz(
            n, tuple((parse_word(op["word"], n), op["param"]) for op in fa["ops"])
        )
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed trace document: {exc}") from None
    return EvolutionTrace(config, records, ansatz)


def write_trace(
    trace: EvolutionTrace,
    path: Union[str, Path],
    csv_path: Optional[Union[str, Path]] = None,
) -> None:
    """Write the JSON trace to ``path`` and, optionally, the CSV projection."""
    text = json.dumps(trace_to_document(trace), indent=2) + "\n"
    Path(path).write_text(text)
    if csv_path is not None:
        Path(csv_path).write_text(trace_to_csv(trace))


def read_trace(path: Union[str, Path]) -> EvolutionTrace:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: not valid JSON ({exc})") from None
    return document_to_trace(doc)


def trace_to_csv(trace: EvolutionTrace) -> str:
    """One row per step; the fidelity cell is empty when not recorded."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(_CSV_COLUMNS)
    for rec in trace.records:
        writer.writerow(
            [rec.t, rec.delta, rec.delta_after, rec.ansatz_size, rec.cnot_count,
             "" if rec.fidelity is None else rec.fidelity]
        )
    return buf.getvalue()
