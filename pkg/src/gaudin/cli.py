"""Command line front end: decompose | verify | singular | eigenbasis | bethe.

Reads a model instance from a JSON file ({"weights": [...], "z": ["p/q", ...]})
and emits machine-readable reports.  Exit codes: 0 ok, 1 verification failure,
2 input error, 3 numerical failure.  Identical configuration and seed produce
byte-identical JSON.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from .bethe import (
    DEFAULT_DEDUP_TOL,
    DEFAULT_TOL_ROOT,
    expected_solution_count,
    solve_bethe,
)
from .eigenbasis import (
    DEFAULT_TOL,
    DEFAULT_TOL_RANK,
    CompletenessError,
    DiagonalizationError,
    build_eigenbasis,
)
from .hamiltonians import build_hamiltonian, verify_family
from .singular import (
    singular_basis_gordan,
    singular_basis_kernel,
    singular_dimension_formula,
)
from .rational_linalg import rank
from .sl2 import (
    DEFAULT_SEED,
    ModelSpec,
    build_total_generator,
    enumerate_weight_space,
    weight_space_dimension_formula,
)

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_INPUT = 2
EXIT_NUMERIC = 3


def _complex_pair(value) -> list:
    value = complex(value)
    return [float(value.real), float(value.imag)]


def _load_spec(path: str) -> ModelSpec:
    with open(path, "r", encoding="utf-8") as handle:
        return ModelSpec.from_json(handle.read())


def _emit(payload: dict, csv_rows, args) -> None:
    if args.format == "json":
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    else:
        header, rows = csv_rows
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        text = buf.getvalue()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
        print(f"wrote {args.format} report to {args.out}")
    else:
        sys.stdout.write(text)


def cmd_decompose(args) -> int:
    spec = _load_spec(args.spec)
    dims = []
    for m in range(spec.total_weight + 1):
        dim = enumerate_weight_space(spec, m).dim
        binom = weight_space_dimension_formula(spec.n_sites, m)
        dims.append({"m": m, "dim": dim, "binomial": binom, "truncated": dim < binom})
    payload = {
        "weights": list(spec.weights),
        "z": [str(x) for x in spec.z],
        "dims": dims,
    }
    rows = [[d["m"], d["dim"], d["binomial"], d["truncated"]] for d in dims]
    _emit(payload, (["m", "dim", "binomial", "truncated"], rows), args)
    return EXIT_OK


def cmd_verify(args) -> int:
    spec = _load_spec(args.spec)
    per_m = []
    matrices = []
    all_ok = True
    for m in range(spec.total_weight + 1):
        report = verify_family(spec, m)
        per_m.append(
            {
                "m": m,
                "commuting": report.commuting,
                "sum_zero": report.sum_zero,
                "symmetry_commute": report.symmetry_commute,
            }
        )
        all_ok = all_ok and report.all_ok
        if args.emit_matrices:
            for i in range(spec.n_sites):
                op = build_hamiltonian(spec, i, m)
                matrices.append(
                    {
                        "m": m,
                        "i": i + 1,  # 1-based site label on the wire
                        "triplets": [
                            [row, col, str(val)] for row, col, val in op.entries()
                        ],
                    }
                )
    payload = {"per_m": per_m, "all_ok": all_ok}
    if args.emit_matrices:
        payload["matrices"] = matrices
    rows = [[d["m"], d["commuting"], d["sum_zero"], d["symmetry_commute"]] for d in per_m]
    _emit(payload, (["m", "commuting", "sum_zero", "symmetry_commute"], rows), args)
    return EXIT_OK if all_ok else EXIT_VERIFY


def cmd_singular(args) -> int:
    spec = _load_spec(args.spec)
    m = args.m
    if m is None:
        print("error: --m is required for the singular command", file=sys.stderr)
        return EXIT_INPUT
    kernel = singular_basis_kernel(spec, m)
    if m <= spec.min_weight:
        basis = singular_basis_gordan(spec, m)
        method = "gordan"
        stacked = [list(v) for v in basis.vectors] + [list(v) for v in kernel.vectors]
        span_ok = (
            rank([list(v) for v in basis.vectors])
            == rank(stacked)
            == len(kernel.vectors)
            == basis.count
        )
    else:
        basis = kernel
        method = "kernel"
        span_ok = True
    raise_e = build_total_generator("E", spec, m)
    annihilated = all(
        all(x == 0 for x in raise_e.apply(list(v))) for v in basis.vectors
    )
    vectors = []
    for j, vec in enumerate(basis.vectors):
        vectors.append(
            {
                "composition": list(basis.labels[j]) if basis.labels else None,
                "vector": [str(x) for x in vec],
            }
        )
    payload = {
        "m": m,
        "method": method,
        "count": basis.count,
        "dim_formula": singular_dimension_formula(spec.n_sites, m),
        "annihilated": annihilated,
        "span_matches_kernel": span_ok,
        "vectors": vectors,
    }
    rows = []
    for j, entry in enumerate(vectors):
        comp = "|".join(str(k) for k in entry["composition"]) if entry["composition"] else ""
        for pos, val in enumerate(entry["vector"]):
            rows.append([m, j, comp, pos, val])
    _emit(payload, (["m", "vector_index", "composition", "entry_index", "value"], rows), args)
    return EXIT_OK if (annihilated and span_ok) else EXIT_VERIFY


def cmd_eigenbasis(args) -> int:
    spec = _load_spec(args.spec)
    m_max = args.m_max if args.m_max is not None else spec.min_weight
    basis = build_eigenbasis(spec, m_max, tol=args.tol, tol_rank=args.tol_rank, seed=args.seed)
    levels = []
    rows = []
    for m, level in enumerate(basis.levels):
        vectors = []
        for j, vec in enumerate(level):
            vectors.append(
                {
                    "coords": [_complex_pair(c) for c in vec.coords],
                    "eigenvalues": [_complex_pair(s) for s in vec.eigenvalues],
                    "origin": vec.origin,
                    "residual": vec.residual,
                }
            )
            row = [m, j, vec.origin, vec.residual]
            for s in vec.eigenvalues:
                row.extend(_complex_pair(s))
            rows.append(row)
        levels.append({"m": m, "vectors": vectors})
    payload = {"m_max": m_max, "levels": levels}
    header = ["m", "vector_index", "origin", "residual"]
    for i in range(spec.n_sites):
        header.extend([f"eigenvalue_{i}_re", f"eigenvalue_{i}_im"])
    _emit(payload, (header, rows), args)
    return EXIT_OK


def cmd_bethe(args) -> int:
    spec = _load_spec(args.spec)
    m = args.m
    if m is None:
        print("error: --m is required for the bethe command", file=sys.stderr)
        return EXIT_INPUT
    solutions = solve_bethe(
        spec,
        m,
        tol_root=args.tol_root,
        dedup_tol=args.dedup_tol,
        n_starts=args.n_starts,
        seed=args.seed,
    )
    entries = []
    rows = []
    for j, sol in enumerate(solutions):
        entries.append(
            {
                "roots": [_complex_pair(w) for w in sol.roots],
                "eigenvalues": [_complex_pair(s) for s in sol.eigenvalues],
                "residual_eq": sol.residual_eq,
                "singular_residual": sol.singular_residual,
                "vector_residual": sol.vector_residual,
                "multiplicity_flag": sol.multiplicity_flag,
            }
        )
        row = [
            m,
            j,
            sol.residual_eq,
            sol.singular_residual,
            sol.vector_residual,
            sol.multiplicity_flag,
        ]
        for w in sol.roots:
            row.extend(_complex_pair(w))
        for s in sol.eigenvalues:
            row.extend(_complex_pair(s))
        rows.append(row)
    payload = {
        "m": m,
        "solutions": entries,
        "expected_count": expected_solution_count(spec.n_sites, m),
        "found": len(solutions),
    }
    header = [
        "m",
        "solution_index",
        "residual_eq",
        "singular_residual",
        "vector_residual",
        "multiplicity_flag",
    ]
    for k in range(m):
        header.extend([f"root_{k}_re", f"root_{k}_im"])
    for i in range(spec.n_sites):
        header.extend([f"eigenvalue_{i}_re", f"eigenvalue_{i}_im"])
    _emit(payload, (header, rows), args)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gaudin",
        description="SL(2) Gaudin model toolkit: exact weight-space algebra and Bethe root finding",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    commands = {
        "decompose": cmd_decompose,
        "verify": cmd_verify,
        "singular": cmd_singular,
        "eigenbasis": cmd_eigenbasis,
        "bethe": cmd_bethe,
    }
    for name, func in commands.items():
        p = sub.add_parser(name)
        p.add_argument("--spec", required=True, help="path to the model JSON file")
        p.add_argument("--m", type=int, default=None, help="spin deviation level")
        p.add_argument("--m-max", dest="m_max", type=int, default=None)
        p.add_argument("--tol", type=float, default=DEFAULT_TOL)
        p.add_argument("--tol-root", dest="tol_root", type=float, default=DEFAULT_TOL_ROOT)
        p.add_argument("--dedup-tol", dest="dedup_tol", type=float, default=DEFAULT_DEDUP_TOL)
        p.add_argument("--tol-rank", dest="tol_rank", type=float, default=DEFAULT_TOL_RANK)
        p.add_argument("--n-starts", dest="n_starts", type=int, default=None)
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        p.add_argument("--out", default=None, help="output path (default: stdout)")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument(
            "--emit-matrices",
            dest="emit_matrices",
            action="store_true",
            help="verify only: include exact Hamiltonian matrices as triplets",
        )
        p.set_defaults(func=func)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (OSError, json.JSONDecodeError, KeyError, ValueError, ZeroDivisionError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (DiagonalizationError, CompletenessError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
