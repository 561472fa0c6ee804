#!/usr/bin/env python
# =============================================================================
# KIRCHHOFF LAB MAIN ENTRY POINT
# CLI interface for solving, verifying and searching counterexamples
# =============================================================================
"""
Kirchhoff Lab Main Module

Command-line interface for the nonlocal Kirchhoff toolkit. Reports go to
standard output as JSON; logs and error diagnostics go to standard error.

Usage:
    kirchhoff-lab solve --config run.json --out u.csv
    kirchhoff-lab verify-pair --model logistic --lambda 2 --m-family constant --m-value 1
    kirchhoff-lab counterexample verify --a 1 --b 10000 --c 0 --p 3 --rho 0.405
    kirchhoff-lab counterexample search --case 2 --a 1 --c 1 --rho 0.1
    kirchhoff-lab eigen --a 0 --b 3.141592653589793 --n 2001
    kirchhoff-lab torsion --a 0 --b 1 --n 401 --out e.csv
    kirchhoff-lab classify-m --family power_shift --a 1 --b 1 --c 0 --p 1

Exit codes:
    0   success (converged, verified, valid witness)
    1   verification or witness failure
    2   invalid input, configuration or precondition
    3   numerical failure (range, mass, non-convergence)
    130 interrupted
"""

import argparse
import logging
import sys
import traceback
from typing import Any, Dict, List, Optional

from pydantic import ValidationError

from kirchhoff_lab.config import (
    RunConfig,
    configure_logging,
    load_config_file,
    load_settings,
    validation_message,
)
from kirchhoff_lab.counterexamples import pointwise_verify, search_case1, search_case2
from kirchhoff_lab.errors import ConfigError, KirchhoffError
from kirchhoff_lab.grid import Interval
from kirchhoff_lab.kirchhoff import DEFAULT_SAMPLES, DEFAULT_SCAN_MAX, KirchhoffM
from kirchhoff_lab.pipeline import run_solve, run_verify
from kirchhoff_lab.reports.handlers import (
    summarize_verification,
    summarize_eigen,
    summarize_error,
    summarize_solve,
    summarize_torsion,
)
from kirchhoff_lab.reports.storage import dumps_report, write_grid_csv, write_report
from kirchhoff_lab.spectral import DEFAULT_EIGEN_TOL, principal_eigenpair, torsion

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_REJECTED = 1
EXIT_INVALID = 2
EXIT_NUMERICAL = 3
EXIT_INTERRUPTED = 130


# =============================================================================
# ARGUMENT PARSING
# =============================================================================

class _Parser(argparse.ArgumentParser):
    """argparse with usage errors raised as ConfigError instead of exiting."""

    def error(self, message: str):
        raise ConfigError(f"{self.prog}: {message}")


def _add_run_flags(cmd: argparse.ArgumentParser) -> None:
    cmd.add_argument("--config", help="JSON run configuration")
    cmd.add_argument("--report", help="Also write the JSON report to this file")
    cmd.add_argument("--model", help="sublinear | concave-convex | logistic | constant")
    cmd.add_argument("--lambda", dest="lam", type=float, help="Model parameter lambda")
    cmd.add_argument("--q", type=float, help="Concave exponent")
    cmd.add_argument("--p", type=float, help="Convex or logistic exponent")
    cmd.add_argument("--value", type=float, help="Constant right-hand side")
    cmd.add_argument("--n", type=int, help="Grid nodes")
    cmd.add_argument("--m-family", help="power_shift | constant")
    cmd.add_argument("--m-a", type=float)
    cmd.add_argument("--m-b", type=float)
    cmd.add_argument("--m-c", type=float)
    cmd.add_argument("--m-p", type=float)
    cmd.add_argument("--m-value", type=float)


def _add_grid_flags(cmd: argparse.ArgumentParser, default_b: float = 3.141592653589793) -> None:
    cmd.add_argument("--a", type=float, default=0.0)
    cmd.add_argument("--b", type=float, default=default_b)
    cmd.add_argument("--n", type=int, default=2001)
    cmd.add_argument("--out", help="CSV output")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="kirchhoff-lab", description="Nonlocal Kirchhoff sub-supersolution toolkit")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    solve = sub.add_parser("solve", help="Construct a verified pair and solve inside it")
    _add_run_flags(solve)
    solve.add_argument("--out", help="Solution file (CSV or JSON per output.format)")
    solve.add_argument("--scheme", help="monotone_from_below | monotone_from_above | picard | shifted")
    solve.add_argument("--max-iter", type=int)

    verify = sub.add_parser("verify-pair", help="Construct or read a pair and verify it")
    _add_run_flags(verify)

    counter = sub.add_parser("counterexample", help="Comparison-principle counterexamples")
    counter_sub = counter.add_subparsers(dest="action", required=True, parser_class=_Parser)
    cv = counter_sub.add_parser("verify", help="Check one parameter set")
    cv.add_argument("--a", type=float, required=True)
    cv.add_argument("--b", type=float, required=True, help="0 selects the constant family M = a")
    cv.add_argument("--c", type=float, default=0.0)
    cv.add_argument("--p", type=float, default=1.0)
    cv.add_argument("--rho", type=float, required=True)
    cv.add_argument("--n", type=int, default=4001)
    cs = counter_sub.add_parser("search", help="Search a witness family")
    cs.add_argument("--case", type=int, choices=(1, 2), required=True)
    cs.add_argument("--a", type=float, default=1.0)
    cs.add_argument("--b", type=float, default=1e4, help="Case 1 coefficient")
    cs.add_argument("--c", type=float, default=None, help="Shift (case 1 default 0, case 2 default 1)")
    cs.add_argument("--rho", type=float, default=0.1, help="Case 2 rho")
    cs.add_argument("--p-min", type=int, default=1)
    cs.add_argument("--p-max", type=int, default=None)
    cs.add_argument("--rho-grid", type=int, default=1000)
    cs.add_argument("--b-min", type=float, default=1e-2)
    cs.add_argument("--b-max", type=float, default=1e8)
    cs.add_argument("--b-per-decade", type=int, default=10)
    cs.add_argument("--n", type=int, default=4001)

    eigen = sub.add_parser("eigen", help="Principal Dirichlet eigenpair")
    _add_grid_flags(eigen)
    eigen.add_argument("--tol", type=float, default=DEFAULT_EIGEN_TOL)

    tors = sub.add_parser("torsion", help="Torsion function")
    _add_grid_flags(tors)

    classify_cmd = sub.add_parser("classify-m", help="Hypothesis flags of a Kirchhoff function")
    classify_cmd.add_argument("--family", default="power_shift", choices=("power_shift", "constant"))
    classify_cmd.add_argument("--a", type=float, default=1.0)
    classify_cmd.add_argument("--b", type=float, default=1.0)
    classify_cmd.add_argument("--c", type=float, default=0.0)
    classify_cmd.add_argument("--p", type=float, default=1.0)
    classify_cmd.add_argument("--m", type=float, default=1.0)
    classify_cmd.add_argument("--scan-max", type=float, default=DEFAULT_SCAN_MAX)
    classify_cmd.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    return parser


# =============================================================================
# CONFIGURATION ASSEMBLY
# =============================================================================

def _set(data: Dict[str, Any], section: str, key: str, value: Any) -> None:
    if value is not None:
        data.setdefault(section, {})[key] = value


def run_config_from_args(args: argparse.Namespace) -> RunConfig:
    """Config file first, then flag overrides, then validation."""
    data: Dict[str, Any] = load_config_file(args.config) if args.config else {}
    m_key = "M" if "M" in data or "kirchhoff" not in data else "kirchhoff"

    _set(data, "model", "kind", args.model)
    _set(data, "model", "lambda", args.lam)
    _set(data, "model", "q", args.q)
    _set(data, "model", "p", args.p)
    _set(data, "model", "value", args.value)
    _set(data, "domain", "n", args.n)
    _set(data, m_key, "family", args.m_family)
    _set(data, m_key, "a", args.m_a)
    _set(data, m_key, "b", args.m_b)
    _set(data, m_key, "c", args.m_c)
    _set(data, m_key, "p", args.m_p)
    _set(data, m_key, "m", args.m_value)
    _set(data, "solver", "scheme", getattr(args, "scheme", None))
    _set(data, "solver", "max_iter", getattr(args, "max_iter", None))
    _set(data, "output", "path", getattr(args, "out", None))
    _set(data, "output", "report", args.report)
    return RunConfig.model_validate(data)


def _emit(payload: Any, report_path: Optional[str] = None) -> None:
    sys.stdout.write(dumps_report(payload) + "\n")
    sys.stdout.flush()
    if report_path:
        write_report(payload, report_path)


# =============================================================================
# COMMANDS
# =============================================================================

def cmd_solve(args: argparse.Namespace) -> int:
    run = run_config_from_args(args)
    m, construction, report = run_solve(run)
    out = run.output.path
    if out:
        if run.output.format.value == "csv":
            write_grid_csv(report.u, out)
        else:
            write_report({"x": report.u.x, "value": report.u.values}, out)
    _emit(summarize_solve(report, construction, m, out), run.output.report)
    if not report.converged:
        logger.warning("⚠️  Not converged; try --scheme shifted or a larger --max-iter")
        return EXIT_NUMERICAL
    return EXIT_OK


def cmd_verify_pair(args: argparse.Namespace) -> int:
    run = run_config_from_args(args)
    m, construction = run_verify(run)
    _emit(summarize_verification(construction, m), run.output.report)
    return EXIT_OK if construction.feasible else EXIT_REJECTED


def cmd_counterexample(args: argparse.Namespace) -> int:
    if args.action == "verify":
        if args.b == 0:
            m = KirchhoffM.constant(args.a)
        else:
            m = KirchhoffM.power_shift(args.a, args.b, args.c, args.p)
        witness = pointwise_verify(m, args.rho, args.n)
    elif args.case == 1:
        witness = search_case1(
            args.b,
            p_range=(args.p_min, args.p_max if args.p_max is not None else 6),
            rho_grid=args.rho_grid,
            a=args.a,
            c=args.c if args.c is not None else 0.0,
            n=args.n,
        )
    else:
        witness = search_case2(
            args.a,
            args.c if args.c is not None else 1.0,
            args.rho,
            p_range=(args.p_min, args.p_max if args.p_max is not None else 10),
            b_range=(args.b_min, args.b_max),
            b_per_decade=args.b_per_decade,
            n=args.n,
        )
    _emit(witness)
    return EXIT_OK if witness.valid else EXIT_REJECTED


def cmd_eigen(args: argparse.Namespace) -> int:
    domain = Interval(a=args.a, b=args.b, n=args.n)
    eig = principal_eigenpair(domain, args.tol)
    if args.out:
        write_grid_csv(eig.phi1, args.out)
    _emit(summarize_eigen(eig, args.out))
    return EXIT_OK


def cmd_torsion(args: argparse.Namespace) -> int:
    domain = Interval(a=args.a, b=args.b, n=args.n)
    e = torsion(domain)
    if args.out:
        write_grid_csv(e, args.out)
    _emit(summarize_torsion(e, args.out))
    return EXIT_OK


def cmd_classify_m(args: argparse.Namespace) -> int:
    if args.family == "constant":
        m = KirchhoffM.constant(args.m, scan_max=args.scan_max, samples=args.samples)
    else:
        m = KirchhoffM.power_shift(args.a, args.b, args.c, args.p,
                                   scan_max=args.scan_max, samples=args.samples)
    _emit(m.classification)
    return EXIT_OK


COMMANDS = {
    "solve": cmd_solve,
    "verify-pair": cmd_verify_pair,
    "counterexample": cmd_counterexample,
    "eigen": cmd_eigen,
    "torsion": cmd_torsion,
    "classify-m": cmd_classify_m,
}


# =============================================================================
# DISPATCH
# =============================================================================

def _fail(payload: Any, code: int) -> int:
    sys.stderr.write(dumps_report(payload, indent=None) + "\n")
    sys.stderr.flush()
    return code


def dispatch(argv: Optional[List[str]] = None) -> int:
    """
    Parse ``argv``, run the subcommand and return its exit code.

    Library errors and validation errors are written to standard error as a
    single JSON line and mapped to their exit codes.
    """
    verbose = False
    try:
        settings = load_settings()
        verbose = settings.verbose
        configure_logging(settings.log_level)
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)

    except KirchhoffError as exc:
        logger.error(f"❌ {type(exc).__name__}: {exc.message}")
        return _fail(summarize_error(exc), exc.exit_code)

    except ValidationError as exc:
        message = validation_message(exc)
        logger.error(f"❌ Invalid configuration: {message}")
        return _fail({"error": "ConfigError", "message": message, "exit_code": EXIT_INVALID},
                     EXIT_INVALID)

    except Exception as exc:
        logger.error(f"❌ {type(exc).__name__}: {exc}")
        if verbose:
            traceback.print_exc()
        return _fail(summarize_error(exc), EXIT_INVALID)


def run():
    """Console-script entry point."""
    try:
        sys.exit(dispatch(sys.argv[1:]))
    except KeyboardInterrupt:
        sys.stderr.write("\n⚠️  Execution interrupted by user.\n")
        sys.exit(EXIT_INTERRUPTED)


if __name__ == "__main__":
    run()


__all__ = [
    "build_parser",
    "run_config_from_args",
    "dispatch",
    "run",
]
