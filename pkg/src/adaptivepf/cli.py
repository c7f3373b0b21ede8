"""Command-line front end.

Every subcommand prints exactly one JSON document to stdout on success.
Errors are reported as JSON on stderr with exit code 2 for flag/input
problems and 1 for runtime (numerical or output I/O) failures.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional

from .errors import (
    CapabilityError,
    ConfigError,
    DegenerateSubspaceError,
    DimensionError,
    GrowthStallError,
    ParseError,
)
from .evolution import (
    EvolutionConfig,
    adaptive_evolve,
    fidelity,
    trotter_evolve,
)
from .krylov import (
    AdaptiveBackend,
    Backend,
    ExactBackend,
    KrylovConfig,
    TrotterBackend,
    build_krylov_basis,
    build_krylov_matrices,
    solve_generalized_eig,
)
from .models import (
    TfimSpec,
    cnot_cost,
    format_hamiltonian,
    gen_tfim,
    parse_hamiltonian_file,
)
from .pauli import Hamiltonian
from .statevector import StateVector, _rotate, basis_state, exact_evolve
from .traceio import trace_to_csv, write_trace


class _UsageError(Exception):
    """Bad flags or unreadable/malformed input files (exit code 2)."""


def _emit(doc: dict) -> None:
    json.dump(doc, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _load_hamiltonian(path: str) -> Hamiltonian:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise _UsageError(f"cannot read Hamiltonian file {path}: {exc}") from None
    return parse_hamiltonian_file(text)


def _initial_state(bits: str, n_qubits: int) -> StateVector:
    return basis_state(n_qubits, bits)


def _parse_backend(text: str) -> tuple[str, Optional[int]]:
    if text == "exact":
        return "exact", None
    if text == "adaptive":
        return "adaptive", None
    if text.startswith("trotter:"):
        try:
            steps = int(text.split(":", 1)[1])
        except ValueError:
            raise _UsageError(f"bad trotter step count in backend {text!r}") from None
        if steps < 1:
            raise _UsageError(f"trotter steps must be >= 1, got {steps}")
        return "trotter", steps
    raise _UsageError(f"unknown backend {text!r} (want exact | trotter:STEPS | adaptive)")


def _complex_matrix(mat) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in mat]


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _cmd_gen_tfim(args: argparse.Namespace) -> int:
    if args.spins < 2:
        raise _UsageError(f"--spins must be >= 2, got {args.spins}")
    if args.seed < 0:
        raise _UsageError(f"--seed must be >= 0, got {args.seed}")
    if args.coeff_sum <= 0:
        raise _UsageError(f"--coeff-sum must be positive, got {args.coeff_sum}")
    h = gen_tfim(TfimSpec(args.spins, args.seed, args.coeff_sum))
    text = format_hamiltonian(
        h, comment=f"random TFIM: spins={args.spins} seed={args.seed} coeff_sum={args.coeff_sum!r}"
    )
    Path(args.out).write_text(text)
    _emit(
        {
            "command": "gen-tfim",
            "n_qubits": h.n_qubits,
            "num_terms": h.num_terms,
            "weight_sum": h.weight_sum,
            "out": str(args.out),
        }
    )
    return 0


def _cmd_evolve(args: argparse.Namespace) -> int:
    h = _load_hamiltonian(args.ham)
    psi0 = _initial_state(args.init, h.n_qubits)
    config = EvolutionConfig(
        total_time=args.time,
        delta_cut=args.delta_cut,
        dt=args.dt,
        record_fidelity=args.fidelity,
    )
    trace = adaptive_evolve(h, psi0, config)
    if args.trace:
        write_trace(trace, args.trace, csv_path=args.csv)
    elif args.csv:
        Path(args.csv).write_text(trace_to_csv(trace))
    last = trace.records[-1]
    doc = {
        "command": "evolve",
        "total_time": config.total_time,
        "ansatz_size": last.ansatz_size,
        "cnot_count": last.cnot_count,
        "final_delta": last.delta_after,
    }
    if args.fidelity:
        doc["final_fidelity"] = last.fidelity
    if args.trace:
        doc["trace"] = str(args.trace)
    _emit(doc)
    return 0


def _cmd_trotter(args: argparse.Namespace) -> int:
    h = _load_hamiltonian(args.ham)
    psi0 = _initial_state(args.init, h.n_qubits)
    state, cnots = trotter_evolve(h, psi0, args.time, args.steps)
    doc = {
        "command": "trotter",
        "total_time": args.time,
        "steps": args.steps,
        "cnot_count": cnots,
    }
    if args.fidelity:
        doc["final_fidelity"] = fidelity(exact_evolve(h, args.time, psi0), state)
    _emit(doc)
    return 0


def _trotter_fidelity_series(h, psi0, total_time, steps):
    dt = total_time / steps
    amps = psi0.amps
    series = [{"t": 0.0, "fidelity": 1.0}]
    for k in range(1, steps + 1):
        for term in h.terms:
            amps = _rotate(term.word, term.coeff * dt, amps)
        state = StateVector(psi0.n_qubits, amps)
        series.append(
            {"t": k * dt, "fidelity": fidelity(exact_evolve(h, k * dt, psi0), state)}
        )
    return series


def _cmd_compare(args: argparse.Namespace) -> int:
    h = _load_hamiltonian(args.ham)
    psi0 = _initial_state(args.init, h.n_qubits)
    try:
        steps_list = [int(s) for s in args.trotter_steps.split(",") if s.strip()]
    except ValueError:
        raise _UsageError(f"bad --trotter-steps list {args.trotter_steps!r}") from None
    if not steps_list or any(s < 1 for s in steps_list):
        raise _UsageError(f"--trotter-steps must be positive integers, got {args.trotter_steps!r}")
    config = EvolutionConfig(
        total_time=args.time,
        delta_cut=args.delta_cut,
        dt=args.dt,
        record_fidelity=True,
    )
    trace = adaptive_evolve(h, psi0, config)
    adaptive_doc = {
        "cnot_count": trace.records[-1].cnot_count,
        "final_fidelity": trace.records[-1].fidelity,
        "series": [{"t": r.t, "fidelity": r.fidelity} for r in trace.records],
    }
    trotter_docs = []
    for steps in steps_list:
        series = _trotter_fidelity_series(h, psi0, args.time, steps)
        _, cnots = trotter_evolve(h, psi0, args.time, steps)
        trotter_docs.append(
            {
                "steps": steps,
                "cnot_count": cnots,
                "final_fidelity": series[-1]["fidelity"],
                "series": series,
            }
        )
    doc = {
        "command": "compare",
        "total_time": args.time,
        "adaptive": adaptive_doc,
        "trotter": trotter_docs,
    }
    if args.out:
        Path(args.out).write_text(json.dumps(doc, indent=2) + "\n")
    _emit(doc)
    return 0


def _cmd_krylov(args: argparse.Namespace) -> int:
    h = _load_hamiltonian(args.ham)
    phi0 = _initial_state(args.init, h.n_qubits)
    kind, steps = _parse_backend(args.backend)
    config = KrylovConfig(args.m, args.dt_krylov, args.s_threshold)
    backend: Backend
    if kind == "exact":
        backend = ExactBackend()
    elif kind == "trotter":
        backend = TrotterBackend(steps)
    else:
        if args.delta_cut is None:
            raise _UsageError("adaptive backend needs --delta-cut")
        backend = AdaptiveBackend(
            EvolutionConfig(
                total_time=args.m * args.dt_krylov,
                delta_cut=args.delta_cut,
                dt=args.dt,
            )
        )
    states, trace = build_krylov_basis(h, phi0, config, backend)
    matrices = build_krylov_matrices(states, h)
    energies, kept_rank = solve_generalized_eig(matrices, config.s_threshold)
    doc = {
        "command": "krylov",
        "m": args.m,
        "backend": args.backend,
        "energy": float(energies[0]),
        "kept_rank": kept_rank,
    }
    if trace is not None:
        doc["cnot_count"] = trace.records[-1].cnot_count
    elif kind == "trotter":
        # deepest circuit: the full m * steps sweeps preparing the last vector
        doc["cnot_count"] = args.m * steps * sum(cnot_cost(t.word) for t in h.terms)
    if args.out:
        full = dict(doc)
        full["energies"] = [float(e) for e in energies]
        full["s_matrix"] = _complex_matrix(matrices.s_matrix)
        full["h_matrix"] = _complex_matrix(matrices.h_matrix)
        Path(args.out).write_text(json.dumps(full, indent=2) + "\n")
        doc["out"] = str(args.out)
    _emit(doc)
    return 0


# ---------------------------------------------------------------------------
# parser / entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="adaptivepf",
        description="Adaptive product-formula circuits for quantum state evolution",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-tfim", help="write a random transverse-field Ising Hamiltonian")
    p.add_argument("--spins", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--coeff-sum", type=float, default=6.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_gen_tfim)

    p = sub.add_parser("evolve", help="adaptive evolution of a basis state")
    p.add_argument("--ham", required=True)
    p.add_argument("--init", required=True, metavar="BITSTRING")
    p.add_argument("--time", type=float, required=True)
    p.add_argument("--dt", type=float, default=5e-3)
    p.add_argument("--delta-cut", type=float, required=True)
    p.add_argument("--trace", default=None, help="write the JSON trace here")
    p.add_argument("--csv", default=None, help="write the CSV projection here")
    p.add_argument("--fidelity", action="store_true")
    p.set_defaults(func=_cmd_evolve)

    p = sub.add_parser("trotter", help="first-order product-formula evolution")
    p.add_argument("--ham", required=True)
    p.add_argument("--init", required=True, metavar="BITSTRING")
    p.add_argument("--time", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--fidelity", action="store_true")
    p.set_defaults(func=_cmd_trotter)

    p = sub.add_parser("compare", help="adaptive vs. Trotter fidelity/CNOT comparison")
    p.add_argument("--ham", required=True)
    p.add_argument("--init", required=True, metavar="BITSTRING")
    p.add_argument("--time", type=float, required=True)
    p.add_argument("--dt", type=float, default=5e-3)
    p.add_argument("--delta-cut", type=float, default=1e-4)
    p.add_argument("--trotter-steps", required=True, metavar="LIST",
                   help="comma-separated step counts, e.g. 64,128")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("krylov", help="ground energy from a real-time Krylov subspace")
    p.add_argument("--ham", required=True)
    p.add_argument("--init", required=True, metavar="BITSTRING")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--dt-krylov", type=float, required=True)
    p.add_argument("--backend", default="exact",
                   help="exact | trotter:STEPS | adaptive")
    p.add_argument("--delta-cut", type=float, default=None,
                   help="adaptive backend residual cut")
    p.add_argument("--dt", type=float, default=5e-3,
                   help="adaptive backend step size")
    p.add_argument("--s-threshold", type=float, default=1e-10)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_krylov)

    return parser


def _fail(code: int, exc: BaseException) -> int:
    json.dump({"error": str(exc), "type": type(exc).__name__}, sys.stderr)
    sys.stderr.write("\n")
    return code


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (_UsageError, ParseError, ConfigError, CapabilityError, DimensionError) as exc:
        return _fail(2, exc)
    except (GrowthStallError, DegenerateSubspaceError, ArithmeticError, OSError,
            ValueError) as exc:
        return _fail(1, exc)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
