"""Command-line entry point.

    dynscatter scatter    --potential SPEC --k K [--route auto]
    dynscatter sweep      --potential SPEC --k-range LO:HI:N
    dynscatter sweep      --goal uinv --k0L-range LO:HI:N [--gamma G]
    dynscatter design     --goal {lasing,cpa,uinv} --k0L X [--gamma G] [--profile-out FILE]
    dynscatter trajectory --potential SPEC --k K [--points N]
    dynscatter verify     [--check-tol TOL]

Exit status: 0 ok, 1 failed check, 2 invalid input, 3 solver failure,
4 spectral singularity at the requested k.
"""

import argparse
import logging
import sys
from typing import Optional, Sequence

from dynscatter import config
from dynscatter.commands import COMMANDS
from dynscatter.middleware.error_handler import CommandResult, EXIT_INVALID_CONFIG
from dynscatter.utils.logger import set_solver_level
from dynscatter.utils.scalars import parse_range, parse_scalar
from dynscatter.utils.tabular import table_to_csv, write_csv_file

logger = logging.getLogger(__name__)


def _scalar(text: str) -> float:
    try:
        return parse_scalar(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _range(text: str):
    try:
        return parse_range(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from exc


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", type=str, default=None, help="write the result here")
    parser.add_argument("--format", choices=["json", "csv"], default="json")
    parser.add_argument("--threads", type=int, default=None)
    parser.add_argument("--rel-tol", dest="rel_tol", type=float, default=None)
    parser.add_argument("--abs-tol", dest="abs_tol", type=float, default=None)
    parser.add_argument("--check-tol", dest="check_tol", type=float, default=None,
                        help="classification threshold (verify: accuracy tolerance override)")
    parser.add_argument("-v", "--verbose", action="count", default=0)


def _route(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--route", choices=["evolution", "jost", "s", "auto"], default="auto")


def _design_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--goal", choices=["lasing", "cpa", "uinv"], default=None)
    parser.add_argument("--gamma", type=_complex, default=None)
    parser.add_argument("--k0", type=_scalar, default=None)
    parser.add_argument("--no-dispersive", dest="dispersive", action="store_false", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=config.APP_NAME,
        description="One-dimensional scattering through transfer-matrix evolution.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {config.VERSION}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scatter", help="amplitudes and flags at one wavenumber")
    p.add_argument("--potential", required=True, help="inline JSON or a .json/.yaml file")
    p.add_argument("--k", type=_scalar, required=True)
    _route(p)
    _common(p)

    p = sub.add_parser("sweep", help="amplitudes over a range of k, or design predictions over k0 L")
    p.add_argument("--potential", default=None)
    p.add_argument("--k-range", dest="k_range", type=_range, default=None)
    p.add_argument("--k0L-range", dest="k0L_range", type=_range, default=None)
    _design_args(p)
    _route(p)
    _common(p)

    p = sub.add_parser("design", help="build a lasing, CPA or right-invisible profile")
    p.add_argument("--k0L", type=_scalar, required=True)
    p.add_argument("--profile-out", dest="profile_out", default=None)
    p.add_argument("--points", type=int, default=None)
    _design_args(p)
    _route(p)
    _common(p)

    p = sub.add_parser("trajectory", help="M(alpha) across the support")
    p.add_argument("--potential", required=True)
    p.add_argument("--k", type=_scalar, required=True)
    p.add_argument("--points", type=int, default=None)
    _common(p)

    p = sub.add_parser("verify", help="run the cross-check suite")
    _common(p)
    return parser


def configure_logging(verbosity: int = 0) -> None:
    level = config.LOG_LEVEL
    if verbosity >= 2:
        level = logging.DEBUG
    elif verbosity == 1:
        level = min(level, logging.INFO)
    logging.basicConfig(level=level, format=config.LOGGING_FORMAT, stream=sys.stderr, force=True)
    set_solver_level(level if verbosity else max(level, logging.WARNING))


def _emit(result: CommandResult, fmt: str, out: Optional[str]) -> None:
    """CSV goes to --out (or stdout, with the envelope moved to stderr); JSON to stdout and --out."""
    document = result.envelope.to_json(indent=2)
    if fmt == "csv" and result.table is not None:
        if out:
            write_csv_file(result.table, out)
            print(document)
        else:
            sys.stdout.write(table_to_csv(result.table))
            print(document, file=sys.stderr)
        return

    print(document)
    if out and fmt == "json":
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(document + "\n")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else EXIT_INVALID_CONFIG
        return code

    configure_logging(args.verbose)
    command = COMMANDS[args.command]
    result = command(args)
    try:
        _emit(result, args.format, args.out)
    except OSError as exc:
        logger.error("could not write %s: %s", args.out, exc)
        return EXIT_INVALID_CONFIG
    logger.debug("%s finished with exit status %d", args.command, result.exit_code)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
