"""Command-line front end: figure tables, ad-hoc sweeps, and the
acceptance-check report.

Exit codes: 0 success, 1 verification failure, 2 numerical failure
(truncation/convergence), 3 usage error.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import sys

from . import __version__, analysis, registry, verification
from .analysis import ConvergenceError, NoCrossingError
from .fockspace import NumericalFailureError, Truncation, TruncationError
from .kerr import QuadratureConvergenceError

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_NUMERICAL = 2
EXIT_USAGE = 3

NUMERICAL_ERRORS = (
    TruncationError,
    NumericalFailureError,
    ConvergenceError,
    NoCrossingError,
    QuadratureConvergenceError,
    ZeroDivisionError,
    FloatingPointError,
)


@dataclasses.dataclass(frozen=True)
class RunConfig:
    """Resolved flag values shared by the subcommands."""

    selector: str | None = None
    fmt: str = "csv"
    out: str = "-"
    dim: int | None = None
    tail_tol: float | None = None
    eta: float | None = None
    alpha: float | None = None
    seed: int | None = None


class _Parser(argparse.ArgumentParser):
    """argparse flavor whose usage errors exit with code 3."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_dim(text: str) -> int:
    value = int(text)
    if value < 2:
        raise argparse.ArgumentTypeError("dim must be at least 2")
    return value


def _tail_tol(text: str) -> float:
    value = float(text)
    if not 0.0 <= value < 1.0:
        raise argparse.ArgumentTypeError("tail tolerance must lie in [0, 1)")
    return value


def _eta(text: str) -> float:
    value = float(text)
    if not 0.0 < value <= 1.0:
        raise argparse.ArgumentTypeError("eta must lie in (0, 1]")
    return value


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=("csv", "json"), default="csv",
                        help="output table format")
    parser.add_argument("--out", default="-", metavar="PATH",
                        help="output path ('-' writes to stdout)")
    parser.add_argument("--dim", type=_positive_dim, default=None,
                        help="force the Fock cutoff instead of the per-quantity default")
    parser.add_argument("--tail-tol", type=_tail_tol, default=None,
                        help="probability mass allowed above the cutoff")
    parser.add_argument("--eta", type=_eta, default=None,
                        help="detector efficiency override")
    parser.add_argument("--alpha", type=float, default=None,
                        help="pump amplitude override")
    parser.add_argument("--seed", type=int, default=None,
                        help="seed for Monte Carlo averaging modes")


def _format_float(value: float) -> str:
    return repr(float(value))


def _metadata_lines(metadata: dict) -> list[str]:
    lines = []
    for key in sorted(metadata):
        value = metadata[key]
        if isinstance(value, float):
            text = _format_float(value)
        else:
            text = json.dumps(value, sort_keys=True)
        lines.append(f"# {key} = {text}")
    return lines


def _render_csv(columns, rows, metadata) -> str:
    lines = _metadata_lines(metadata)
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_format_float(v) for v in row))
    return "\n".join(lines) + "\n"


def _render_json(columns, rows, metadata) -> str:
    payload = {
        "metadata": metadata,
        "columns": list(columns),
        "rows": [[float(v) for v in row] for row in rows],
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _emit(columns, rows, metadata, cfg: RunConfig) -> None:
    metadata = {**metadata, "version": __version__}
    if cfg.fmt == "json":
        text = _render_json(columns, rows, metadata)
    else:
        text = _render_csv(columns, rows, metadata)
    if cfg.out == "-":
        sys.stdout.write(text)
    else:
        with open(cfg.out, "w", encoding="utf-8") as handle:
            handle.write(text)


def _config(args) -> RunConfig:
    return RunConfig(
        selector=getattr(args, "selector", None),
        fmt=args.format,
        out=args.out,
        dim=args.dim,
        tail_tol=args.tail_tol,
        eta=args.eta,
        alpha=args.alpha,
        seed=args.seed,
    )


def _print_figures() -> None:
    for fig in registry.FIGURES.values():
        print(f"{fig.name:7s} {fig.description}")


def _print_quantities() -> None:
    for name in sorted(registry.QUANTITIES):
        q = registry.QUANTITIES[name]
        variables = ", ".join(q.variables)
        print(f"{name:26s} vars: {variables:14s} {q.doc}")


def cmd_figure(args) -> int:
    if args.list:
        _print_figures()
        return EXIT_OK
    cfg = _config(args)
    selector = cfg.selector or args.figure
    if selector is None:
        print("a figure selector is required (or use --list)", file=sys.stderr)
        return EXIT_USAGE
    try:
        fig = registry.figure(selector)
    except KeyError as exc:
        print(exc.args[0], file=sys.stderr)
        return EXIT_USAGE
    table = fig.build(dim=cfg.dim, tail_tol=cfg.tail_tol, eta=cfg.eta,
                      alpha=cfg.alpha, seed=cfg.seed)
    metadata = {"figure": fig.name, "description": fig.description, **table.metadata}
    _emit(table.columns, table.rows, metadata, cfg)
    return EXIT_OK


def cmd_sweep(args) -> int:
    if args.list:
        _print_quantities()
        return EXIT_OK
    cfg = _config(args)
    if args.quantity is None:
        print("--quantity is required (or use --list)", file=sys.stderr)
        return EXIT_USAGE
    try:
        quantity = registry.resolve(args.quantity)
    except KeyError as exc:
        print(exc.args[0], file=sys.stderr)
        return EXIT_USAGE
    fixed: dict[str, float] = {}
    if cfg.eta is not None:
        fixed["eta"] = cfg.eta
    if cfg.alpha is not None:
        fixed["alpha"] = cfg.alpha
    for item in args.fixed or ():
        key, _, value = item.partition("=")
        if not _:
            print(f"--set expects name=value, got {item!r}", file=sys.stderr)
            return EXIT_USAGE
        fixed[key] = float(value)
    if args.var is None or args.lo is None or args.hi is None or args.points is None:
        print("--var, --lo, --hi and --points are required", file=sys.stderr)
        return EXIT_USAGE
    known = set(quantity.variables) | set(quantity.defaults)
    if args.var not in known:
        print(
            f"{args.quantity} cannot be swept over {args.var!r}; "
            f"parameters: {', '.join(sorted(known))}",
            file=sys.stderr,
        )
        return EXIT_USAGE
    try:
        spec = analysis.SweepSpec(args.var, args.lo, args.hi, args.points, fixed)
    except ValueError as exc:
        print(f"invalid sweep range: {exc}", file=sys.stderr)
        return EXIT_USAGE
    trunc = None
    if cfg.dim is not None:
        trunc = Truncation(cfg.dim) if cfg.tail_tol is None else Truncation(cfg.dim, cfg.tail_tol)
    result = analysis.sweep(spec, quantity, trunc=trunc, tail_tol=cfg.tail_tol)
    metadata = {
        "quantity": quantity.name,
        "variable": spec.variable,
        "lo": spec.lo,
        "hi": spec.hi,
        "points": spec.points,
        **result.metadata,
    }
    metadata.pop("fixed", None)
    metadata["fixed"] = result.metadata["fixed"]
    _emit(result.columns, result.rows, metadata, cfg)
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = verification.VerifyConfig(
        dim=args.dim,
        tail_tol=args.tail_tol,
        eta=args.eta if args.eta is not None else 0.9,
    )
    results = verification.run_all(cfg)
    print(verification.format_report(results))
    return EXIT_OK if all(res.passed for res in results) else EXIT_VERIFY


def cmd_list(args) -> int:
    print("figures:")
    _print_figures()
    print()
    print("quantities:")
    _print_quantities()
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="sqherald",
                     description="Heralded single-photon statistics from "
                                 "superpositions of oppositely squeezed states")
    parser.add_argument("--version", action="version", version=f"sqherald {__version__}")
    sub = parser.add_subparsers(dest="command")

    p_fig = sub.add_parser("figure", help="emit the data table behind one figure",
                           parents=[], add_help=True)
    p_fig.add_argument("selector", nargs="?", default=None,
                       help="figure name, e.g. fig3a (see --list)")
    p_fig.add_argument("--figure", default=None, metavar="NAME",
                       help="alternative way to pick the figure")
    p_fig.add_argument("--list", action="store_true", help="list figure selectors")
    _add_common(p_fig)
    p_fig.set_defaults(handler=cmd_figure)

    p_sweep = sub.add_parser("sweep", help="sweep one registered quantity over a grid")
    p_sweep.add_argument("--quantity", default=None, help="registered quantity name")
    p_sweep.add_argument("--var", default=None, help="swept variable name")
    p_sweep.add_argument("--lo", type=float, default=None)
    p_sweep.add_argument("--hi", type=float, default=None)
    p_sweep.add_argument("--points", type=int, default=None)
    p_sweep.add_argument("--set", dest="fixed", action="append", metavar="NAME=VALUE",
                         help="fix another parameter (repeatable)")
    p_sweep.add_argument("--list", action="store_true", help="list registered quantities")
    _add_common(p_sweep)
    p_sweep.set_defaults(handler=cmd_sweep)

    p_verify = sub.add_parser("verify", help="run the acceptance checks")
    p_verify.add_argument("--dim", type=_positive_dim, default=None,
                          help="force the Fock cutoff for every truncated computation")
    p_verify.add_argument("--tail-tol", type=_tail_tol, default=None)
    p_verify.add_argument("--eta", type=_eta, default=None,
                          help="detector efficiency for the crossover criterion")
    p_verify.set_defaults(handler=cmd_verify)

    p_list = sub.add_parser("list", help="list figures and quantities")
    p_list.set_defaults(handler=cmd_list)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "handler"):
        parser.print_help()
        return EXIT_USAGE
    try:
        return args.handler(args)
    except NUMERICAL_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"invalid parameter: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
