"""Command line interface.

Subcommands: encode (matrix file to memory file), apply (memory to a
state, with optional oracle verification), vqe (one Hamiltonian file)
and curve (a manifest of distance-tagged Hamiltonian files). Exit
codes: 0 success, 2 input error, 3 verification failure, 4 optimizer
non-convergence (results are still written). Numeric output uses 17
significant digits and identical invocations produce byte-identical
files.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import fileio, plots, vqe as vqedrv
from .circuit import run_and_extract
from .encoding import encode_matrix, read_memory_file, write_memory_file

VERIFY_TOLERANCE = 1e-9


def cmd_encode(args) -> int:
    matrix = fileio.read_matrix_file(args.input)
    mem = encode_matrix(matrix)
    write_memory_file(args.output, mem)
    print("n %d" % mem.n)
    print("zeta %s" % fileio.format_real(mem.zeta))
    print("records %d" % len(mem))
    print("r %d" % mem.r)
    return 0


def cmd_apply(args) -> int:
    mem = read_memory_file(args.memory)
    psi = fileio.read_state_file(args.state)
    result = run_and_extract(mem, psi, verify=args.verify)
    if args.out:
        fileio.write_state_file(args.out, result.output)
    else:
        sys.stdout.write(fileio.serialize_state(result.output))
    print("success_probability %s" % fileio.format_real(result.success_probability))
    print("scale %s" % fileio.format_real(result.scale))
    if result.success_probability == 0.0:
        print("warning: success probability is zero; the output vector vanishes", file=sys.stderr)
    if args.verify:
        print("max_abs_error %s" % fileio.format_real(result.oracle_error))
        if result.oracle_error > VERIFY_TOLERANCE:
            print(
                "error: output differs from the dense oracle by %s"
                % fileio.format_real(result.oracle_error),
                file=sys.stderr,
            )
            return 3
    return 0


def _vqe_settings(args):
    spec = vqedrv.AnsatzSpec(layers=args.layers)
    config = vqedrv.VqeConfig(
        max_iter=args.max_iter,
        seed=args.seed,
        restarts=args.restarts,
        tolerance=args.tolerance,
        mode=args.mode,
    )
    return spec, config


def _plot_path(csv_path: str) -> str:
    return os.path.splitext(csv_path)[0] + ".png"


def cmd_vqe(args) -> int:
    terms = vqedrv.parse_hamiltonian_file(args.hamiltonian)
    spec, config = _vqe_settings(args)
    exact = vqedrv.ground_energy(terms)
    result = vqedrv.vqe_minimize(terms, spec, config)
    row = vqedrv.CurveRow(
        distance=args.distance,
        vqe_energy=result.energy,
        exact_energy=exact,
        iterations=result.iterations,
        converged=result.converged,
    )
    fileio.atomic_write_text(args.out, vqedrv.curve_rows_to_csv([row]))
    if not args.no_plot:
        plots.save_convergence_plot(result.trace, _plot_path(args.out), exact_energy=exact)
    print("vqe_energy %s" % fileio.format_real(result.energy))
    print("exact_energy %s" % fileio.format_real(exact))
    print("iterations %d" % result.iterations)
    print("converged %s" % result.converged)
    if not result.converged:
        print("warning: optimizer hit the iteration cap; result written anyway", file=sys.stderr)
        return 4
    return 0


def cmd_curve(args) -> int:
    tagged = fileio.read_manifest_file(args.manifest)
    spec, config = _vqe_settings(args)
    rows = vqedrv.energy_curve(tagged, spec, config)
    fileio.atomic_write_text(args.out, vqedrv.curve_rows_to_csv(rows))
    if not args.no_plot:
        plots.save_curve_plot(rows, _plot_path(args.out))
    failed = False
    for row in rows:
        print(
            "distance %s vqe_energy %s exact_energy %s converged %s"
            % (
                fileio.format_real(row.distance),
                fileio.format_real(row.vqe_energy),
                fileio.format_real(row.exact_energy),
                row.converged,
            )
        )
        if row.message:
            print("warning: distance %s failed: %s" % (fileio.format_real(row.distance), row.message), file=sys.stderr)
        failed = failed or not row.converged
    if failed:
        print("warning: at least one point did not converge; results written anyway", file=sys.stderr)
        return 4
    return 0


def _add_vqe_flags(sub):
    sub.add_argument("--layers", type=int, default=3, help="ansatz rotation layers (default 3)")
    sub.add_argument("--restarts", type=int, default=5, help="seeded optimizer restarts (default 5)")
    sub.add_argument("--max-iter", type=int, default=2000, help="Nelder-Mead iteration cap per restart")
    sub.add_argument("--seed", type=int, default=7, help="random seed for restart points")
    sub.add_argument("--tolerance", type=float, default=1e-8, help="optimizer function tolerance")
    sub.add_argument(
        "--mode",
        choices=("exact", "circuit", "swap"),
        default="circuit",
        help="expectation evaluation path (default circuit)",
    )
    sub.add_argument("--out", required=True, help="output CSV path")
    sub.add_argument("--no-plot", action="store_true", help="skip the PNG next to the CSV")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qgatemem",
        description="Store a matrix as gate-encoded quantum memory and apply it to states.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    encode = subparsers.add_parser("encode", help="encode a matrix file into a memory file")
    encode.add_argument("--input", required=True, help="matrix text file")
    encode.add_argument("--output", required=True, help="memory file to write")
    encode.set_defaults(func=cmd_encode)

    apply_cmd = subparsers.add_parser("apply", help="apply a memory to a state")
    apply_cmd.add_argument("--memory", required=True, help="memory file")
    apply_cmd.add_argument("--state", required=True, help="input state file")
    apply_cmd.add_argument("--out", help="write the output vector here instead of stdout")
    apply_cmd.add_argument("--verify", action="store_true", help="compare against the dense matrix product")
    apply_cmd.set_defaults(func=cmd_apply)

    vqe_cmd = subparsers.add_parser("vqe", help="minimize one Hamiltonian file")
    vqe_cmd.add_argument("--hamiltonian", required=True, help="Pauli term file")
    vqe_cmd.add_argument("--distance", type=float, default=0.0, help="distance tag for the CSV row")
    _add_vqe_flags(vqe_cmd)
    vqe_cmd.set_defaults(func=cmd_vqe)

    curve = subparsers.add_parser("curve", help="energy curve over a manifest of Hamiltonian files")
    curve.add_argument("--manifest", required=True, help="lines of 'distance path'")
    _add_vqe_flags(curve)
    curve.set_defaults(func=cmd_curve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
