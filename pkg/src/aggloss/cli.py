"""Command-line front end.

    aggloss estimate 0.5 0.5 --operator optimal
    aggloss loss 0.6 0.7 --operator product
    aggloss league --grid-n 1000 --format csv
    aggloss prior 0.75 0.5
    aggloss prior-mass --grid-n 1000
    aggloss surface --quantity loss --operator min --resolution 250 --out min.csv
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from .core_bounds import Marginals
from .evaluation import (
    DEFAULT_CLAMP,
    SURFACE_QUANTITIES,
    league_table,
    pointwise_loss,
    quantity_surface,
    write_league_csv,
    write_surface_csv,
)
from .operators import OperatorId
from .posterior_loss import optimal_expected_kl
from .prior import prior_density
from .quadrature import GridSpec, build_grid, integrate_marginal_average

EXIT_IO = 3


def _probability(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number") from None
    if not (0.0 <= value <= 1.0):
        raise argparse.ArgumentTypeError(f"{text} is not a probability in [0, 1]")
    return value


def _operator(text: str) -> OperatorId:
    try:
        return OperatorId.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _operator_list(text: str) -> list[OperatorId]:
    return [_operator(t) for t in text.split(",") if t.strip()]


def _grid_n(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if n < 2:
        raise argparse.ArgumentTypeError("grid n must be at least 2")
    return n


def _alpha(text: str) -> float:
    value = float(text)
    if not (0.0 < value <= 1.0):
        raise argparse.ArgumentTypeError("alpha must lie in (0, 1]")
    return value


def _clamp(text: str) -> float:
    value = float(text)
    if not (0.0 < value < 0.5):
        raise argparse.ArgumentTypeError("clamp epsilon must lie in (0, 0.5)")
    return value


def _resolution(text: str) -> int:
    value = int(text)
    if value < 2:
        raise argparse.ArgumentTypeError("resolution must be at least 2")
    return value


def _workers(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("workers must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aggloss",
        description="Optimal P(X and Y) from marginals, and expected-KL scoring of aggregation operators.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_text in (
        ("estimate", "print an operator's estimate of P(X and Y)"),
        ("loss", "print the expected KL loss of an operator's estimate"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("a", type=_probability)
        p.add_argument("b", type=_probability)
        p.add_argument("--operator", type=_operator, default=OperatorId.OPTIMAL)
        if name == "loss":
            p.add_argument("--clamp", type=_clamp, default=DEFAULT_CLAMP)

    p = sub.add_parser("league", help="input-averaged expected loss per operator")
    p.add_argument("--grid-n", type=_grid_n, default=1000)
    p.add_argument("--alpha", type=_alpha, default=0.5)
    p.add_argument("--clamp", type=_clamp, default=DEFAULT_CLAMP)
    p.add_argument("--operators", type=_operator_list, default=list(OperatorId),
                   help="comma-separated operator names")
    p.add_argument("--format", choices=("table", "csv"), default="table")
    p.add_argument("--workers", type=_workers, default=1)

    p = sub.add_parser("prior", help="marginal prior density P(a, b)")
    p.add_argument("a", type=_probability)
    p.add_argument("b", type=_probability)

    p = sub.add_parser("prior-mass", help="integral of the prior over the quadrature grid")
    p.add_argument("--grid-n", type=_grid_n, default=1000)
    p.add_argument("--alpha", type=_alpha, default=0.5)

    p = sub.add_parser("surface", help="write a uniform-grid surface as CSV")
    p.add_argument("--quantity", choices=SURFACE_QUANTITIES, required=True)
    p.add_argument("--operator", type=_operator)
    p.add_argument("--resolution", type=_resolution, required=True)
    p.add_argument("--clamp", type=_clamp, default=DEFAULT_CLAMP)
    p.add_argument("--out", required=True, help="output path, or - for stdout")
    return parser


def _cmd_estimate(args) -> int:
    print(f"{args.operator.function(args.a, args.b):.10g}")
    return 0


def _cmd_loss(args) -> int:
    m = Marginals(args.a, args.b)
    if args.operator is OperatorId.OPTIMAL:
        value = optimal_expected_kl(m)
    else:
        value = float(pointwise_loss(args.operator.function, m.a, m.b, args.clamp))
    print(f"{value:.10g}")
    return 0


def _cmd_league(args) -> int:
    spec = GridSpec(args.grid_n, args.alpha)
    entries = league_table(args.operators, spec, args.clamp, workers=args.workers)
    if args.format == "csv":
        write_league_csv(entries, sys.stdout)
        return 0
    width = max(len(e.op.label) for e in entries)
    print(f"{'Method':<{width}}  Expected loss")
    for e in entries:
        print(f"{e.op.label:<{width}}  {e.avg_loss:.6f}")
    print(f"(grid n={spec.n}, alpha={spec.alpha:g}, clamp={args.clamp:g})")
    return 0


def _cmd_prior(args) -> int:
    value = prior_density(Marginals(args.a, args.b))
    print("inf" if math.isinf(value) else f"{value:.10g}")
    return 0


def _cmd_prior_mass(args) -> int:
    grid = build_grid(GridSpec(args.grid_n, args.alpha))
    mass = integrate_marginal_average(lambda a, b: np.ones_like(a), grid)
    print(f"{mass:.10g}")
    return 0


def _cmd_surface(args, parser) -> int:
    needs_op = args.quantity in ("estimate", "loss")
    if needs_op and args.operator is None:
        parser.error(f"--operator is required for --quantity {args.quantity}")
    if not needs_op and args.operator is not None:
        parser.error(f"--operator is not used with --quantity {args.quantity}")
    rows = quantity_surface(args.quantity, args.resolution, args.operator, args.clamp)
    try:
        if args.out == "-":
            write_surface_csv(rows, sys.stdout)
        else:
            with open(args.out, "w", newline="") as fh:
                write_surface_csv(rows, fh)
    except OSError as exc:
        print(f"aggloss: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "surface":
        return _cmd_surface(args, parser)
    handler = {
        "estimate": _cmd_estimate,
        "loss": _cmd_loss,
        "league": _cmd_league,
        "prior": _cmd_prior,
        "prior-mass": _cmd_prior_mass,
    }[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
