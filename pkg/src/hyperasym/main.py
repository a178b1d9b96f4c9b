"""Command-line front end: eval, table and sweep."""

import argparse
import logging
import sys
from typing import List, Optional

from . import __version__
from .errors import ConvergenceError, DomainError, HyperAsymError
from .models import CellSpec, Method, OutputFormat, Preset, Variant, parse_number
from .reports import (
    load_cells,
    parse_cells,
    write_csv,
    write_markdown,
    write_sweep_csv,
    write_xlsx,
)
from .series import DEFAULT_MAX_TERMS, DEFAULT_ORACLE_TOL
from .tables import TableRunner, evaluate_point, sweep

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_DOMAIN = 2
EXIT_CONVERGENCE = 3


def cmd_eval(args: argparse.Namespace) -> int:
    """Evaluate one point and print value, error vs oracle and flags."""
    cell = CellSpec(
        k=args.k, x=args.x, t=args.t, order=args.order,
        variant=args.variant, method=args.method,
    )
    report = evaluate_point(cell, args.oracle_tol, args.max_terms)

    print(f"method:     {args.method}")
    print(f"k, x, t:    {float(args.k):g}, {float(args.x):g}, {float(args.t):.10g}")
    if args.method is not Method.ORACLE:
        print(f"order:      {args.order}")
        print(f"variant:    {report.variant}")
        print(f"value:      {report.approx_value:.17g}")
        print(f"oracle:     {report.oracle_value:.17g}")
        print(f"rel_error:  {report.rel_error:.6e}")
        print(f"abs_error:  {report.abs_error:.6e}")
    else:
        print(f"value:      {report.oracle_value:.17g}")
    print(f"terms_used: {report.terms_used}")
    print(f"flags:      {','.join(report.flags) if report.flags else '-'}")
    if report.status != "ok":
        print(f"status:     {report.status}")
        return EXIT_CONVERGENCE
    return EXIT_OK


def cmd_table(args: argparse.Namespace) -> int:
    """Regenerate a preset table or evaluate custom cells."""
    cells: List[CellSpec] = []
    if args.cells:
        cells.extend(parse_cells(args.cells))
    if args.cells_file:
        cells.extend(load_cells(args.cells_file))
    preset = args.preset
    if cells and preset is not Preset.CUSTOM:
        raise DomainError("--cells/--cells-file require --preset custom")

    if args.format is OutputFormat.XLSX and not args.out:
        raise DomainError("--format xlsx requires --out FILE")

    runner = TableRunner(oracle_tol=args.oracle_tol, max_terms=args.max_terms, jobs=args.jobs)
    spec = runner.build_spec(preset, cells, args.format)
    reports = runner.run(spec)

    if spec.format is OutputFormat.XLSX:
        write_xlsx(reports, preset, args.out)
        print(f"Workbook generated: {args.out}")
    elif args.out:
        with open(args.out, "w", newline="", encoding="utf-8") as f:
            _write_text(reports, spec.format, preset, f)
    else:
        _write_text(reports, spec.format, preset, sys.stdout)

    return EXIT_OK if all(r.ok for r in reports) else EXIT_FAILURE


def _write_text(reports, fmt: OutputFormat, preset: Preset, stream) -> None:
    if fmt is OutputFormat.MARKDOWN:
        write_markdown(reports, preset, stream)
    else:
        write_csv(reports, stream)


def cmd_sweep(args: argparse.Namespace) -> int:
    """CSV of rel_error and local slope on a log-spaced k grid."""
    rows = sweep(
        args.x, args.t, args.order, args.k_min, args.k_max, args.steps,
        args.variant, args.oracle_tol, args.max_terms,
    )
    if args.out:
        with open(args.out, "w", newline="", encoding="utf-8") as f:
            write_sweep_csv(rows, f)
    else:
        write_sweep_csv(rows, sys.stdout)
    return EXIT_OK


def _number(text: str):
    try:
        return parse_number(text)
    except DomainError as e:
        raise argparse.ArgumentTypeError(str(e))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hyperasym",
        description="Large-k asymptotics of 3F2(1, ak, ak+1/2; tk+1, k+1; x)",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  hyperasym eval --k 100 --x 0.5 --t 0.75 --method asym --order 0
  hyperasym eval --k 150 --x 0.75 --t 1/3 --method uniform_f0
  hyperasym table --preset table1 --format md
  hyperasym table --preset custom --cells "100,0.5,0.75,2"
  hyperasym sweep --x 0.5 --t 0.75 --order 1 --k-min 100 --k-max 800
""",
    )
    parser.add_argument("--version", action="version", version=f"hyperasym {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0,
                        help="-v for progress, -vv for series diagnostics")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--oracle-tol", type=float, default=DEFAULT_ORACLE_TOL,
                        help="relative tolerance of the direct-summation oracle")
    common.add_argument("--max-terms", type=int, default=DEFAULT_MAX_TERMS,
                        help="term budget of every series")

    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", parents=[common], help="evaluate a single point")
    p_eval.add_argument("--k", type=_number, required=True)
    p_eval.add_argument("--x", type=_number, required=True)
    p_eval.add_argument("--t", type=_number, required=True, help="decimal or p/q")
    p_eval.add_argument("--method", type=Method, choices=list(Method), default=Method.ASYM)
    p_eval.add_argument("--order", type=int, default=0, choices=[0, 1, 2])
    p_eval.add_argument("--variant", type=Variant, choices=list(Variant), default=None)
    p_eval.set_defaults(handler=cmd_eval)

    p_table = sub.add_parser("table", parents=[common], help="reproduce an error table")
    p_table.add_argument("--preset", type=Preset, choices=list(Preset), default=Preset.TABLE1)
    p_table.add_argument("--cells", help='custom cells "k,x,t,M[,variant];..."')
    p_table.add_argument("--cells-file", help="custom cells from a .csv or .xlsx file")
    p_table.add_argument("--format", type=OutputFormat, choices=list(OutputFormat),
                         default=OutputFormat.CSV)
    p_table.add_argument("--jobs", type=int, default=1, help="worker processes")
    p_table.add_argument("--out", help="write the table to FILE instead of stdout")
    p_table.set_defaults(handler=cmd_table)

    p_sweep = sub.add_parser("sweep", parents=[common], help="rel_error against k")
    p_sweep.add_argument("--x", type=_number, required=True)
    p_sweep.add_argument("--t", type=_number, required=True)
    p_sweep.add_argument("--order", type=int, default=0, choices=[0, 1, 2])
    p_sweep.add_argument("--variant", type=Variant, choices=list(Variant), default=None)
    p_sweep.add_argument("--k-min", type=float, default=100.0)
    p_sweep.add_argument("--k-max", type=float, default=800.0)
    p_sweep.add_argument("--steps", type=int, default=8)
    p_sweep.add_argument("--out", help="write the sweep to FILE instead of stdout")
    p_sweep.set_defaults(handler=cmd_sweep)

    return parser


def configure_logging(verbosity: int) -> None:
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity >= 2:
        level = logging.DEBUG
    logging.basicConfig(
        level=level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def main(argv: Optional[List[str]] = None) -> int:
    """Entry point; returns the process exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose)

    try:
        return args.handler(args)
    except DomainError as e:
        print(f"domain error: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    except ConvergenceError as e:
        print(f"convergence failure: {e}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except HyperAsymError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILURE
    except OSError as e:
        print(f"I/O error: {e}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
