"""Command-line entry point.

Exit codes: 0 success, 1 configuration or input error, 2 numerical
non-convergence (the computation needs a larger budget).
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from pathlib import Path

import numpy as np

from fraclab.errors import ConfigInvalid, FraclabError, NumericalNonConvergence
from fraclab.funcspace.catalog import CATALOG, FAMILIES, sample
from fraclab.funcspace.grid import Grid1D, GridND
from fraclab.quadrature import DEFAULT_QUAD

EXIT_OK, EXIT_CONFIG, EXIT_NONCONVERGENCE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigInvalid(f"{self.prog}: {message}")


def _grid_args(p: argparse.ArgumentParser, t_min=-6.0, t_max=6.0, n_points=121) -> None:
    p.add_argument("--t-min", type=float, default=t_min)
    p.add_argument("--t-max", type=float, default=t_max)
    p.add_argument("--n-points", type=int, default=n_points)
    p.add_argument("--out", help="output file (default: standard output)")


def _grid(args, n: int = 1):
    g = Grid1D(args.t_min, args.t_max, args.n_points)
    return g if n == 1 else GridND((g,) * n)


def _write(args, text: str | bytes) -> None:
    data = text.encode() if isinstance(text, str) else text
    if args.out:
        try:
            Path(args.out).write_bytes(data)
        except OSError as exc:
            raise ConfigInvalid(f"cannot write {args.out}: {exc.strerror or exc}") from exc
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def _cmd_frac_deriv(args) -> None:
    from fraclab.fracderiv import marchaud_left, marchaud_right, weyl_integral

    grid = _grid(args)
    if args.weyl:
        if args.side != "left":
            raise ConfigInvalid("the Weyl integral is left-sided")
        res = weyl_integral(args.fn, args.alpha, DEFAULT_QUAD, grid)
    else:
        op = marchaud_left if args.side == "left" else marchaud_right
        res = op(args.fn, args.alpha, DEFAULT_QUAD, grid)
    _write(args, res.to_csv())


def _cmd_frac_laplacian(args) -> None:
    from fraclab.fraclap import frac_laplacian_pv, frac_laplacian_semigroup, spectral_fraclap

    grid = _grid(args, args.n)
    if args.method == "spectral":
        res = spectral_fraclap(sample(args.fn, grid), args.s)
    else:
        op = frac_laplacian_pv if args.method == "pv" else frac_laplacian_semigroup
        res = op(args.fn, args.s, DEFAULT_QUAD, grid, n=args.n)
    _write(args, res.to_csv())


def _cmd_weights(args) -> None:
    from fraclab.weights.estimators import LatticeSpec, muckenhoupt_rows, sawyer_rows

    lat = LatticeSpec.dyadic(args.jmin, args.jmax)
    if args.side == "two-sided":
        rows = muckenhoupt_rows(args.weight, args.p, lat, DEFAULT_QUAD)
    else:
        rows = sawyer_rows(args.weight, args.p, lat, DEFAULT_QUAD, args.side)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["a", "h", "product"])
    for a, h, v in rows:
        w.writerow([repr(float(a)), repr(float(h)), repr(float(v))])
    _write(args, buf.getvalue())
    top = max(v for _, _, v in rows)
    over = [h for _, h, v in sorted(rows, key=lambda r: (r[1], r[0])) if not v <= args.cap]
    status = f"cap exceeded at scale h={over[0]:g}" if over else "within cap"
    print(f"{args.weight} p={args.p} side={args.side}: lattice max {top:.12g} ({status})", file=sys.stderr)


def _cmd_maximal(args) -> None:
    from fraclab.maximal import m_hl, m_minus, m_plus, order_sup_fracderiv, order_sup_fraclap

    grid = _grid(args, args.n)
    orders = [float(x) for x in args.orders.split(",")] if args.orders else list(np.round(np.arange(0.05, 0.96, 0.05), 2))
    if args.op == "mminus":
        res = m_minus(args.fn, grid=grid)
    elif args.op == "mplus":
        res = m_plus(args.fn, grid=grid)
    elif args.op == "mhl":
        res = m_hl(args.fn, grid=grid)
    elif args.op == "tstar-deriv":
        if args.n != 1:
            raise ConfigInvalid("tstar-deriv is one-dimensional")
        res = order_sup_fracderiv(args.fn, orders, DEFAULT_QUAD, grid)
    else:
        eps = 2.0 ** -np.arange(1, 9)
        res = order_sup_fraclap(args.fn, orders, eps, DEFAULT_QUAD, grid, n=args.n)
    _write(args, res.to_csv())
    if "C" in res.extra:
        print(f"max ratio C = {res.extra['C']:.12g}", file=sys.stderr)


def _cmd_sweep(args) -> None:
    from fraclab.harness.config import load_config
    from fraclab.harness.experiments import run
    from fraclab.harness.report import emit

    cfg = load_config(args.config)
    fmt = args.format or cfg.fmt
    data = emit(run(cfg), fmt)
    if args.out is None and cfg.output:
        args.out = cfg.output
    _write(args, data)


def _cmd_catalog(args) -> None:
    from fraclab.weights.types import WEIGHTS_1D, WEIGHTS_ND

    lines = ["functions:"]
    for name, entry in CATALOG.items():
        lines.append(f"  {name:18s} {entry.family}{tuple(entry.parameters)}  [{entry.decay_class}]")
    lines.append("families (use family(args)):")
    for fam, (names, defaults) in FAMILIES.items():
        lines.append(f"  {fam}({', '.join(f'{a}={d:g}' for a, d in zip(names, defaults))})")
    lines.append("weights (1D):")
    lines += [f"  {name}" for name in WEIGHTS_1D]
    lines.append("weights (nD):")
    lines += [f"  {name}" for name in WEIGHTS_ND]
    print("\n".join(lines))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fraclab", description="Fractional derivatives, Laplacians, maximal operators and weights.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("frac-deriv", help="one-sided Marchaud derivative or Weyl integral on a grid")
    p.add_argument("--fn", required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--side", choices=("left", "right"), default="left")
    p.add_argument("--weyl", action="store_true")
    _grid_args(p)
    p.set_defaults(func=_cmd_frac_deriv)

    p = sub.add_parser("frac-laplacian", help="fractional Laplacian on a grid")
    p.add_argument("--fn", required=True)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--method", choices=("semigroup", "pv", "spectral"), default="pv")
    p.add_argument("--n", type=int, default=1, choices=(1, 2, 3))
    _grid_args(p, -4.0, 4.0, 33)
    p.set_defaults(func=_cmd_frac_laplacian)

    p = sub.add_parser("weights", help="weight-class constants")
    wsub = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    c = wsub.add_parser("check", help="per-interval products over a dyadic lattice")
    c.add_argument("--weight", required=True)
    c.add_argument("--p", type=float, required=True)
    c.add_argument("--side", choices=("minus", "plus", "two-sided"), default="minus")
    c.add_argument("--jmin", type=int, default=-10)
    c.add_argument("--jmax", type=int, default=10)
    c.add_argument("--cap", type=float, default=1e12)
    c.add_argument("--out")
    c.set_defaults(func=_cmd_weights)

    p = sub.add_parser("maximal", help="maximal operators and order suprema")
    p.add_argument("--op", choices=("mminus", "mplus", "mhl", "tstar-deriv", "tstar-lap"), required=True)
    p.add_argument("--fn", required=True)
    p.add_argument("--n", type=int, default=1, choices=(1, 2, 3))
    p.add_argument("--orders", help="comma-separated orders for the T* operators")
    _grid_args(p, -4.0, 4.0, 33)
    p.set_defaults(func=_cmd_maximal)

    p = sub.add_parser("sweep", help="run an experiment described by a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--out")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("catalog", help="list catalog functions and weights")
    p.set_defaults(func=_cmd_catalog)
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "alpha", None) is not None and not math.isfinite(args.alpha):
            raise ConfigInvalid("alpha must be finite")
        args.func(args)
    except NumericalNonConvergence as exc:
        print(f"fraclab: numerical non-convergence: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except FraclabError as exc:
        print(f"fraclab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
