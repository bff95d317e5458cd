"""Command-line entry point: analyze, check, sweep2, sweep3, gen.

Exit codes: 0 success, 1 parse failure, 2 validation failure,
3 economy not stationary, 4 generation failure.
"""
import argparse
import logging
import sys
from pathlib import Path

from . import _kernels
from .decomposition import full_report, group_decomposition
from .errors import ParseError, UnreachableBalance, ValidationError
from .io import EconomyFile, detect_format, read_economy, write_economy, write_report, write_sweep
from .steady_state import check_stationarity, random_stationary
from .sweeps import grid_values, sweep_three_agent, sweep_two_agent

log = logging.getLogger("cashflow_entropy")

EXIT_OK, EXIT_PARSE, EXIT_INVALID, EXIT_NOT_STATIONARY, EXIT_GEN = 0, 1, 2, 3, 4


def _emit(data: bytes, out_path):
    if out_path in (None, "-"):
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        Path(out_path).write_bytes(data)


def _load(path):
    data = sys.stdin.buffer.read() if path == "-" else Path(path).read_bytes()
    return read_economy(data, detect_format(path, data))


def cmd_analyze(args) -> int:
    economy = _load(args.input)
    m = economy.matrix
    report, profile = full_report(m)
    groups = None
    tree = economy.group_tree()
    if tree is not None and profile is not None:
        groups = group_decomposition(m, tree, args.group_side)
    _emit(write_report(report, profile, groups, m.agents), args.output)
    if report.sum_identity_residual is None:
        print("identity residuals: undefined (no inter-agent flow)", file=sys.stderr)
    else:
        print(
            f"identity residuals: sum={report.sum_identity_residual:.3e} "
            f"difference={report.diff_identity_residual:.3e} "
            f"savings={report.savings_identity_residual:.3e}",
            file=sys.stderr,
        )
    return EXIT_OK


def cmd_check(args) -> int:
    economy = _load(args.input)
    chk = check_stationarity(economy.matrix, args.tolerance)
    print(f"max_relative_imbalance: {chk.max_relative_imbalance!r}")
    print(f"fixed_point_residual: {chk.fixed_point_residual!r}")
    print(f"tolerance: {chk.tolerance!r}")
    print(f"is_stationary: {str(chk.is_stationary).lower()}")
    return EXIT_OK if chk.is_stationary else EXIT_NOT_STATIONARY


def cmd_sweep2(args) -> int:
    a = grid_values(args.a_min, args.a_max, args.resolution)
    b = grid_values(args.b_min, args.b_max, args.resolution)
    _emit(write_sweep(sweep_two_agent(args.quantity, a, b)), args.output)
    return EXIT_OK


def cmd_sweep3(args) -> int:
    a = grid_values(args.a_min, args.a_max, args.resolution)
    b = grid_values(args.b_min, args.b_max, args.resolution)
    _emit(write_sweep(sweep_three_agent(args.k, a, b)), args.output)
    return EXIT_OK


def cmd_gen(args) -> int:
    try:
        m = random_stationary(args.n, args.seed, args.sparsity)
    except UnreachableBalance as exc:
        log.error("generation failed: %s", exc)
        return EXIT_GEN
    fmt = args.format or ("csv" if str(args.output or "").lower().endswith(".csv") else "json")
    _emit(write_economy(EconomyFile(m), fmt), args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cashflow-entropy", description="Entropy decomposition of cash-flow matrices")
    p.add_argument("--verbose", "-v", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    an = sub.add_parser("analyze", help="full entropy decomposition report")
    an.add_argument("--input", "-i", required=True, help="economy file (.json or .csv; '-' for stdin)")
    an.add_argument("--output", "-o", default=None, help="report path (default stdout)")
    an.add_argument("--group-side", choices=("in", "out"), default="in",
                    help="marginal decomposed over the group taxonomy (default: in, i.e. income)")
    an.set_defaults(func=cmd_analyze)

    ck = sub.add_parser("check", help="stationarity check")
    ck.add_argument("--input", "-i", required=True)
    ck.add_argument("--tolerance", type=float, default=1e-9)
    ck.set_defaults(func=cmd_check)

    s2 = sub.add_parser("sweep2", help="two-agent heat-map grid")
    s2.add_argument("--quantity", choices=("ps", "Hs", "Hsc", "H"), default="H")
    s2.add_argument("--resolution", type=int, default=41)
    s2.add_argument("--a-min", type=float, default=0.0)
    s2.add_argument("--a-max", type=float, default=4.0)
    s2.add_argument("--b-min", type=float, default=0.0)
    s2.add_argument("--b-max", type=float, default=4.0)
    s2.add_argument("--output", "-o", default=None)
    s2.set_defaults(func=cmd_sweep2)

    s3 = sub.add_parser("sweep3", help="three-agent heat-map grid of H at fixed k")
    s3.add_argument("--k", type=float, required=True)
    s3.add_argument("--resolution", type=int, default=49)
    s3.add_argument("--a-min", type=float, default=0.02)
    s3.add_argument("--a-max", type=float, default=0.98)
    s3.add_argument("--b-min", type=float, default=0.02)
    s3.add_argument("--b-max", type=float, default=0.98)
    s3.add_argument("--output", "-o", default=None)
    s3.set_defaults(func=cmd_sweep3)

    gn = sub.add_parser("gen", help="random stationary economy")
    gn.add_argument("--n", type=int, required=True)
    gn.add_argument("--seed", type=int, default=0)
    gn.add_argument("--sparsity", type=float, default=0.0)
    gn.add_argument("--format", choices=("json", "csv"), default=None)
    gn.add_argument("--output", "-o", default=None)
    gn.set_defaults(func=cmd_gen)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(message)s")
    log.debug("kernel backend: %s", _kernels.backend())
    try:
        return args.func(args)
    except ParseError as exc:
        log.error("parse error: %s", exc)
        return EXIT_PARSE
    except (ValidationError, OSError) as exc:
        log.error("invalid input: %s", exc)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
