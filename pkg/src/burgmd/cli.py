"""Command-line entry points: ``generate``, ``solve`` and ``bench``.

Exit codes: 0 success, 1 usage error, 2 solver/runtime error, 3 I/O error
(including unreadable or malformed dataset files).
"""

import argparse
import json
import logging
import sys

from . import __version__
from .bench import (
    SOLVERS,
    ExperimentConfig,
    estimate_fstar,
    finalize_errors,
    run_experiment,
    trace_solver,
    write_results,
)
from .errors import BurgMDError, DatasetFormatError, InvalidArgumentError
from .smd import DEFAULT_NEWTON_EPS
from .synthetic import generate_w_dataset, read_dataset, write_dataset

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser():
    p = _Parser(prog="burgmd", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="simulate Pauli shots on the W state")
    g.add_argument("--qubits", type=int, required=True)
    g.add_argument("--shots", type=int, required=True)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--out", required=True)
    g.add_argument("--exhaustive", action="store_true",
                   help="cycle through all non-identity Paulis instead of sampling them")

    s = sub.add_parser("solve", help="run one solver on a dataset file")
    s.add_argument("--solver", choices=SOLVERS, required=True)
    s.add_argument("--data", required=True)
    s.add_argument("--epochs", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--eta", type=float, help="step size (default: horizon-based schedule)")
    s.add_argument("--eps", type=float, default=DEFAULT_NEWTON_EPS, help="Newton tolerance")
    s.add_argument("--out", help="write the convergence trace as CSV")
    s.add_argument("--fstar-epochs", type=int, default=0,
                   help="estimate f* with all solvers for this many epochs "
                        "(default: minimum loss seen in this run)")
    s.add_argument("--timing", action="store_true",
                   help="record wall-clock time in the trace (otherwise 0)")

    b = sub.add_parser("bench", help="run an experiment described by a JSON config")
    b.add_argument("--config", required=True)
    b.add_argument("--out", help="results CSV (overrides 'output' in the config)")
    return p


def _generate(args):
    if args.qubits < 1 or args.shots < 1:
        raise UsageError("--qubits and --shots must be positive")
    if not 0 <= args.seed < 2**64:
        raise UsageError("--seed must be a 64-bit unsigned integer")
    shots = generate_w_dataset(args.qubits, args.shots, args.seed, args.exhaustive)
    write_dataset(shots, args.out)
    print(f"wrote {shots.total_shots} shots in {len(shots.records)} records to {args.out}")


def _solve(args):
    if args.epochs < 1:
        raise UsageError("--epochs must be >= 1")
    if args.eta is not None and not args.eta > 0:
        raise UsageError("--eta must be positive")
    data = read_dataset(args.data)
    rows = trace_solver(data, args.solver, args.epochs, args.seed, args.eta, args.eps,
                        timing=args.timing)
    fstar = estimate_fstar(data, args.fstar_epochs, args.seed, args.eps) if args.fstar_epochs else None
    finalize_errors(rows, fstar)
    if args.out:
        write_results(rows, args.out)
    last = rows[-1]
    fid = "n/a" if last.fidelity is None else format(last.fidelity, ".12g")
    print(f"solver {args.solver}")
    print(f"epochs {args.epochs}")
    print(f"f {last.f_value:.12g}")
    print(f"fidelity {fid}")


def _bench(args):
    try:
        config = ExperimentConfig.from_json(args.config)
    except (TypeError, json.JSONDecodeError, InvalidArgumentError) as exc:
        raise UsageError(f"bad config {args.config}: {exc}") from exc
    out = args.out or config.output
    if not out:
        raise UsageError("no output path: pass --out or set 'output' in the config")
    result = run_experiment(config)
    write_results(result.rows, out)
    print(f"wrote {len(result.rows)} rows to {out} (f* = {result.fstar:.12g})")
    for solver, seed, msg in result.failures:
        print(f"FAILED {solver} seed {seed}: {msg}", file=sys.stderr)
    return EXIT_RUNTIME if result.failures else EXIT_OK


def main(argv=None):
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    handler = {"generate": _generate, "solve": _solve, "bench": _bench}[args.command]
    try:
        return handler(args) or EXIT_OK
    except (UsageError, InvalidArgumentError) as exc:
        print(f"burgmd {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, DatasetFormatError) as exc:
        print(f"burgmd {args.command}: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except BurgMDError as exc:
        print(f"burgmd {args.command}: solver error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
