"""Command line for verification runs, matrix dumps, orbit reduction and double-coset scans."""

from __future__ import annotations

import argparse
import json
import logging
import os
from pathlib import Path

from pgl2_whittaker.api import build_matrix, dump_matrix, reduce_matrix, scan_double_cosets, scan_report_payload, verify
from pgl2_whittaker.exceptions import VerificationFailedError
from pgl2_whittaker.group import reassemble_a, render_matrix
from pgl2_whittaker.harness import SUITES, emit_report, render_params
from pgl2_whittaker.options import LevelParams, ScanBounds, VerifyOptions

LOG_LEVEL_ENV = "PGL2_WHITTAKER_LOG_LEVEL"

logger = logging.getLogger(__name__)


def _chi_sigma(value: str) -> int:
    if value in ("+1", "1"):
        return 1
    if value == "-1":
        return -1
    raise argparse.ArgumentTypeError(f"chi(sigma) must be +1 or -1, got {value!r}")


def _add_level_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--p", type=int, required=True, help="Prime characteristic in [2, 13]")
    parser.add_argument("--k", type=int, required=True, help="Congruence level k >= 1")
    parser.add_argument("--n", type=int, default=0, help="Valuation block")
    parser.add_argument("--prec", type=int, default=None, help="Relative precision N_rel (default 8)")
    parser.add_argument("--int-depth", type=int, default=None, help="Haar integration depth M_int (default k+2)")
    parser.add_argument("--chi-sigma", type=_chi_sigma, default=1, help="Value of chi on sigma, +1 or -1")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pgl2-whittaker",
        description="Exact finite-level computations for a cuspidal representation of PGL_2(F_p((t)))",
    )
    parser.add_argument("--verbose", "-v", action="store_true", help="Log at DEBUG level")
    commands = parser.add_subparsers(dest="command", required=True)

    verify_parser = commands.add_parser("verify", help="Run claim suites")
    verify_parser.add_argument("claim", choices=[*SUITES, "all"], help="Claim id, or 'all'")
    _add_level_arguments(verify_parser)
    verify_parser.add_argument(
        "--trials", type=int, default=None, help="Random instances per suite (default 100, 1000 for decomposition)"
    )
    verify_parser.add_argument("--seed", type=int, default=0, help="Seed of the suite generators")
    verify_parser.add_argument("--workers", type=int, default=1, help="Worker processes")
    verify_parser.add_argument("--timing", action="store_true", help="Record runtimes in the report")
    verify_parser.add_argument("--no-stability", action="store_true", help="Skip the precision and sign reruns")
    verify_parser.add_argument("--json", type=Path, default=None, help="Write the JSON report to this file")

    for name, help_text in (("phi-matrix", "Dump the matrix of phi"), ("kernel-table", "Dump the closed-form kernel")):
        matrix_parser = commands.add_parser(name, help=help_text)
        _add_level_arguments(matrix_parser)
        matrix_parser.add_argument("--format", choices=("json", "csv"), default="json", help="Output format")
        matrix_parser.add_argument("--out", type=Path, default=None, help="Output file (default stdout)")
        matrix_parser.add_argument("--workers", type=int, default=1, help="Worker processes")

    orbit_parser = commands.add_parser("orbit", help="Orbit computations")
    orbit_commands = orbit_parser.add_subparsers(dest="orbit_command", required=True)
    reduce_parser = orbit_commands.add_parser("reduce", help="Reduce a matrix to its orbit representative")
    reduce_parser.add_argument("--mat", required=True, help='Matrix "e11;e12;e21;e22" of Laurent expressions')
    _add_level_arguments(reduce_parser)

    scan_parser = commands.add_parser("scan", help="Double-coset scans")
    scan_commands = scan_parser.add_subparsers(dest="scan_command", required=True)
    cosets_parser = scan_commands.add_parser("double-cosets", help="Scan I0 x I0 double cosets")
    cosets_parser.add_argument("--p", type=int, required=True, help="Prime characteristic in [2, 13]")
    cosets_parser.add_argument("--n-min", type=int, default=-2, help="Smallest valuation")
    cosets_parser.add_argument("--n-max", type=int, default=2, help="Largest valuation")
    cosets_parser.add_argument("--depth", type=int, default=2, help="Truncation of Iwahori parameters")
    cosets_parser.add_argument("--workers", type=int, default=1, help="Worker processes")
    cosets_parser.add_argument("--json", type=Path, default=None, help="Write the JSON report to this file")
    return parser


def _configure_logging(verbose: bool) -> None:
    level_name = "DEBUG" if verbose else os.environ.get(LOG_LEVEL_ENV, "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level_name, logging.WARNING), format="%(levelname)s: %(message)s")


def _level(args: argparse.Namespace) -> LevelParams:
    kwargs: dict[str, int] = {"p": args.p, "k": args.k, "n": args.n, "chi_sigma": args.chi_sigma}
    if args.prec is not None:
        kwargs["N_rel"] = args.prec
    if args.int_depth is not None:
        kwargs["M_int"] = args.int_depth
    return LevelParams(**kwargs)  # type: ignore[arg-type]


def _write(path: Path | None, text: str) -> str:
    if path is None:
        return text
    path.write_text(text, encoding="utf-8")
    logger.info("wrote %s", path)
    return ""


def _run_verify(args: argparse.Namespace) -> str:
    options = VerifyOptions(
        trials=args.trials,
        seed=args.seed,
        workers=args.workers,
        include_timing=args.timing,
        stability=not args.no_stability,
    )
    reports = verify(args.claim, _level(args), options)
    if args.json is not None:
        _write(args.json, emit_report(reports, "json"))
    output = emit_report(reports, "table")
    failed = [report.claim_id for report in reports if report.failed]
    if failed:
        raise VerificationFailedError(failed, output)
    return output


def _run_matrix(args: argparse.Namespace) -> str:
    kind = "phi" if args.command == "phi-matrix" else "kernel"
    matrix = build_matrix(kind, _level(args), workers=args.workers)
    return _write(args.out, dump_matrix(matrix, args.format))


def _run_reduce(args: argparse.Namespace) -> str:
    reduced = reduce_matrix(args.mat, _level(args))
    if reduced is None:
        return "irrelevant orbit\n"
    rep, factor = reduced
    lines = [f"representative: {rep}", f"matrix: {render_matrix(rep.to_group())}"]
    lines.append(f"A factor: sigma^{factor.sigma_power} i, i = {render_params(factor.iwahori)}")
    lines.append(f"A factor matrix: {render_matrix(reassemble_a(factor))}")
    return "\n".join(lines) + "\n"


def _run_scan(args: argparse.Namespace) -> str:
    bounds = ScanBounds(p=args.p, n_min=args.n_min, n_max=args.n_max, depth=args.depth)
    report = scan_double_cosets(bounds, workers=args.workers)
    if args.json is not None:
        _write(args.json, json.dumps(scan_report_payload(report), indent=2) + "\n")
    lines = [f"{result.point}: {'pass' if result.passes else 'fail'}" for result in report.results]
    lines.append("passing orbits: " + (", ".join(str(point) for point in report.passing_orbits) or "none"))
    return "\n".join(lines) + "\n"


def main(argv: list[str]) -> str:
    """Run the command line and return what it prints.

    Raises:
        Pgl2WhittakerError: On invalid input or precision loss; ``VerificationFailedError`` when a
            suite fails, carrying the rendered report.
        OSError: If an output file cannot be written.
    """
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)
    if args.command == "verify":
        return _run_verify(args)
    if args.command in ("phi-matrix", "kernel-table"):
        return _run_matrix(args)
    if args.command == "orbit":
        return _run_reduce(args)
    return _run_scan(args)


__all__ = ["main"]
