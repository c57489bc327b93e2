"""Command-line entry point.

Exit codes: 0 success, 1 verification failure, 2 configuration error.
Every JSON document carries ``schema_version`` and the resolved config.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

from .combinatorics import DomainError, MultiplicityTable
from .concat import (
    SCHEMA_VERSION,
    ConfigError,
    ErrorRateModel,
    check_seed,
    run_monte_carlo,
    single_event_sweep,
)
from .dfs import NoSingletError, dfs_basis
from .five_qubit import five_qubit_code
from .operators import ExchangeModel
from .verification import run_verification, dims_rows

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2

OUT_DIR_ENV = "DFS_EXCHANGE_OUT_DIR"


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0 or not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"expected a positive finite number, got {text}")
    return value


def _seed(text: str) -> int:
    try:
        return check_seed(int(text))
    except (ValueError, ConfigError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dfs-exchange",
        description="Decoherence-free subspaces under exchange errors: checks and simulations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--out", type=Path, help=f"output file (default: stdout, or ${OUT_DIR_ENV}/<command>.json)")
        p.add_argument("--format", choices=("json", "table"), default="json")

    p = sub.add_parser("dims", help="exact DFS dimensions for even K up to --k")
    p.add_argument("--k", type=int, default=10, help="largest register size")
    p.add_argument("--kernel-max", type=int, default=0, help="also diagonalize S^2 for K up to this size")
    common(p)

    p = sub.add_parser("verify", help="numerical identity checks for one register size")
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--tol", type=_positive_float, default=1e-10)
    p.add_argument("--coupling", type=float, default=1.0, help="total uniform coupling J (pairs get J/K)")
    p.add_argument("--model", type=Path, help="exchange-model JSON for a nonuniform leakage check")
    common(p)

    p = sub.add_parser("simulate", help="concatenated DFS + five-qubit code trials")
    p.add_argument("--mode", choices=("monte-carlo", "sweep"), default="monte-carlo")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--rate", type=float, default=0.01, help="mean exchange events per cluster pair per cycle")
    p.add_argument("--theta-max", type=_positive_float, default=math.pi)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--workers", type=int, default=1)
    common(p)

    p = sub.add_parser("basis", help="export the singlet basis for one register size")
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--out", type=Path)

    p = sub.add_parser("multiplicities", help="export exact spin multiplicities for K qubits")
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--out", type=Path)

    p = sub.add_parser("syndrome-table", help="export the five-qubit code syndrome table")
    p.add_argument("--out", type=Path)
    return parser


def _document(command: str, config: dict, result) -> str:
    doc = {"schema_version": SCHEMA_VERSION, "command": command, "config": config, "result": result}
    return json.dumps(doc, indent=2) + "\n"


def _emit(text: str, out: Path | None, command: str, suffix: str = "json") -> None:
    if out is None and os.environ.get(OUT_DIR_ENV):
        out = Path(os.environ[OUT_DIR_ENV]) / f"{command}.{suffix}"
    if out is None:
        sys.stdout.write(text)
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text)


def _fmt(x: float | None) -> str:
    return "-" if x is None else f"{x:.2e}"


def cmd_dims(args) -> int:
    rows = dims_rows(args.k, args.kernel_max)
    if args.format == "table":
        header = ["K", "dfs_dimension", "encoded_qubits", "hook_check"]
        if args.kernel_max:
            header.append("kernel_dimension")
        lines = ["  ".join(f"{h:>16}" for h in header)]
        for r in rows:
            cells = [str(r["K"]), str(r["dfs_dimension"]), f"{r['encoded_qubits']:.4f}", str(r["hook_check"])]
            if "kernel_dimension" in r:
                cells.append(str(r["kernel_dimension"]))
            lines.append("  ".join(f"{c:>16}" for c in cells))
        text = "\n".join(lines) + "\n"
    else:
        text = _document("dims", {"k_max": args.k, "kernel_max": args.kernel_max}, rows)
    _emit(text, args.out, "dims", "json" if args.format == "json" else "txt")
    return EXIT_OK if all(r["hook_check"] for r in rows) else EXIT_FAILED


def cmd_verify(args) -> int:
    model = ExchangeModel.load(args.model) if args.model else None
    report = run_verification(args.k, args.tol, args.coupling, model)
    if args.format == "table":
        lines = [f"{'check':<28}{'residual':>12}  status"]
        for c in report.checks:
            status = c.detail if c.status == "skipped" else c.status.upper()
            lines.append(f"{c.name:<28}{_fmt(c.residual):>12}  {status}")
        lines.append(f"overall: {'PASS' if report.passed else 'FAIL'}")
        text = "\n".join(lines) + "\n"
    else:
        config = {"k": args.k, "tol": args.tol, "coupling": args.coupling, "model": str(args.model) if args.model else None}
        text = _document("verify", config, report.as_dict())
    _emit(text, args.out, "verify", "json" if args.format == "json" else "txt")
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_simulate(args) -> int:
    if args.trials < 1:
        raise ConfigError(f"--trials must be at least 1, got {args.trials}")
    if args.workers < 1:
        raise ConfigError(f"--workers must be at least 1, got {args.workers}")
    config = {"mode": args.mode, "seed": args.seed}
    if args.mode == "sweep":
        reports = single_event_sweep(args.seed)
        fids = [r.fidelity_after for r in reports]
        hist: dict[str, int] = {}
        for r in reports:
            for s in r.syndromes:
                hist[s] = hist.get(s, 0) + 1
        result = {
            "schema_version": SCHEMA_VERSION,
            "seed": args.seed,
            "n_trials": len(reports),
            "trials": [r.as_dict() for r in reports],
            "aggregate": {
                "mean_fidelity": math.fsum(fids) / len(fids),
                "min_fidelity": min(fids),
                "syndrome_histogram": dict(sorted(hist.items())),
            },
        }
    else:
        model = ErrorRateModel.from_rate(args.rate, args.theta_max)
        config.update({"trials": args.trials, "rate": args.rate, "theta_max": args.theta_max})
        result = run_monte_carlo(args.trials, model, args.seed, workers=args.workers).as_dict()

    if args.format == "table":
        agg = result["aggregate"]
        lines = [
            f"mode           {args.mode}",
            f"seed           {args.seed}",
            f"trials         {result['n_trials']}",
            f"mean_fidelity  {agg['mean_fidelity']:.12f}",
            f"min_fidelity   {agg['min_fidelity']:.12f}",
            "syndromes      " + ", ".join(f"{k}:{v}" for k, v in agg["syndrome_histogram"].items()),
        ]
        text = "\n".join(lines) + "\n"
    else:
        text = _document("simulate", config, result)
    _emit(text, args.out, "simulate", "json" if args.format == "json" else "txt")
    return EXIT_OK


def cmd_basis(args) -> int:
    _emit(dfs_basis(args.k).to_text(), args.out, "basis")
    return EXIT_OK


def cmd_multiplicities(args) -> int:
    if args.k < 1:
        raise DomainError("--k must be positive")
    _emit(MultiplicityTable.build(args.k).to_json() + "\n", args.out, "multiplicities")
    return EXIT_OK


def cmd_syndrome_table(args) -> int:
    _emit(five_qubit_code().syndrome_table_text(), args.out, "syndrome-table", "txt")
    return EXIT_OK


COMMANDS = {
    "dims": cmd_dims,
    "verify": cmd_verify,
    "simulate": cmd_simulate,
    "basis": cmd_basis,
    "multiplicities": cmd_multiplicities,
    "syndrome-table": cmd_syndrome_table,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, DomainError, NoSingletError, ValueError, OSError) as exc:
        print(f"dfs-exchange {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
