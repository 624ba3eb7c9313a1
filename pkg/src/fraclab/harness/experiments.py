"""Dispatch of configured experiments to the numerical modules."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from fraclab import __version__
from fraclab.errors import ConfigInvalid, FraclabError
from fraclab.fracderiv import derivative_limit_sweep, ftfc_compose, marchaud_left, spectral_fracderiv
from fraclab.fraclap import (
    frac_laplacian_pv,
    frac_laplacian_semigroup,
    laplacian_limit_sweep,
    semigroup_property_suite,
    spectral_fraclap,
)
from fraclab.funcspace.catalog import as_closed_form_1d, lookup, sample
from fraclab.funcspace.grid import Grid1D
from fraclab.harness.config import ExperimentConfig
from fraclab.maximal import order_sup_fracderiv, order_sup_fraclap
from fraclab.report import SweepReport
from fraclab.weights.estimators import LatticeSpec, muckenhoupt_rows, sawyer_rows


def thread_count() -> int:
    """Worker cap from ``FRACLAB_THREADS`` (default 1)."""
    raw = os.environ.get("FRACLAB_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise ConfigInvalid(f"FRACLAB_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ConfigInvalid(f"FRACLAB_THREADS must be a positive integer, got {raw!r}")
    return n


def _map(fn, items):
    """Ordered map; results are assembled in input order whatever the worker count."""
    items = list(items)
    n = min(thread_count(), len(items))
    if n <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def _merge(parts: list[SweepReport], meta: dict) -> SweepReport:
    rows = tuple(r for part in parts for r in part.rows)
    return SweepReport(parts[0].columns, rows, {**parts[0].metadata, **meta})


def _deriv_limits(cfg: ExperimentConfig, quad):
    grid = cfg.grid()
    parts = _map(lambda a: derivative_limit_sweep(cfg.function, [a], cfg.p, cfg.weight, quad, grid), cfg.orders)
    return _merge(parts, {})


def _lap_limits(cfg: ExperimentConfig, quad):
    grid = cfg.grid()
    parts = _map(lambda s: laplacian_limit_sweep(cfg.function, [s], cfg.p, cfg.weight, quad, grid,
                                                 method=cfg.method, n=cfg.dim), cfg.orders)
    return _merge(parts, {})


def _maximal_ratios(cfg: ExperimentConfig, quad):
    grid = cfg.grid()
    if cfg.operator == "deriv":
        if cfg.dim != 1:
            raise ConfigInvalid("the fractional derivative is one-dimensional")
        res = order_sup_fracderiv(cfg.function, cfg.orders, quad, grid)
        operator = "fractional derivative"
        pts = res.t[:, None]
    else:
        res = order_sup_fraclap(cfg.function, cfg.orders, cfg.eps, quad, grid, n=cfg.dim)
        operator = "truncated fractional Laplacian"
        pts = np.asarray(res.t).reshape(len(res.values), -1)
    names = ("t", "x2", "x3")[: pts.shape[1]]
    rows = [tuple(float(c) for c in x) + (float(v), float(a), float(r))
            for x, v, a, r in zip(pts, res.values, res.argmax_scale, res.extra["ratio"])]
    return SweepReport(names + ("value", "argmax_order", "ratio"), tuple(rows),
                       {"operator": operator, "C": res.extra["C"]})


def _weight_scan(cfg: ExperimentConfig, quad):
    lat = LatticeSpec.dyadic(cfg.j_min, cfg.j_max)
    if cfg.side == "two-sided":
        raw = muckenhoupt_rows(cfg.weight, cfg.p, lat, quad, dim=cfg.dim)
    else:
        raw = sawyer_rows(cfg.weight, cfg.p, lat, quad, cfg.side)
    rows = []
    for a, h, v in raw:
        a = a[0] if isinstance(a, tuple) else a
        log10 = math.log10(v) if math.isfinite(v) and v > 0 else 308.0
        rows.append((float(a), float(h), log10, int(not v <= 1e12)))
    const = max(v for _, _, v in raw)
    return SweepReport(("a", "h", "log10_product", "cap_exceeded"), tuple(rows),
                       {"lattice_max": const if math.isfinite(const) else "inf", "cap": 1e12})


def _ftfc(cfg: ExperimentConfig, quad):
    reps = _map(lambda a: ftfc_compose(cfg.function, a, quad), cfg.orders)
    rows = tuple((r.alpha, r.sup_distance, r.l2_distance) for r in reps)
    return SweepReport(("alpha", "sup_distance", "l2_distance"), rows,
                       {"window": [list(map(float, reps[0].window))]})


def _semigroup_suite(cfg: ExperimentConfig, quad):
    grid = cfg.grid()
    suite = semigroup_property_suite(cfg.function, cfg.p, cfg.weight, quad, grid, n=cfg.dim)
    rows = tuple((i + 1, float(c.value), int(c.passed)) for i, c in enumerate(suite.checks))
    meta = {"checks": [c.name for c in suite.checks],
            "tolerances": [c.tolerance if math.isfinite(c.tolerance) else None for c in suite.checks],
            "passed": suite.passed}
    return SweepReport(("item", "value", "passed"), rows, meta)


def _oracle_xcheck(cfg: ExperimentConfig, quad):
    cf = as_closed_form_1d(lookup(cfg.function).closed_form_1d())
    if cf.period is None:
        raise ConfigInvalid(f"oracle_xcheck needs periodic data; {cfg.function!r} is not periodic")
    grid = Grid1D(0.0, float(cf.period), cfg.n_points)
    sf = sample(cfg.function, grid)
    pts = grid.points[:: max(1, (cfg.n_points - 1) // 16)]

    def one(order):
        md = marchaud_left(cf, order, quad, points=pts).values
        sd = spectral_fracderiv(sf, order).values[:: max(1, (cfg.n_points - 1) // 16)]
        pv = frac_laplacian_pv(cf, order, quad, points=pts[:, None], n=1).values
        sg = frac_laplacian_semigroup(cf, order, quad, points=pts[:, None], n=1).values
        sl = spectral_fraclap(sf, order).values[:: max(1, (cfg.n_points - 1) // 16)]
        return (order, float(np.max(np.abs(md - sd))), float(np.max(np.abs(pv - sl))),
                float(np.max(np.abs(sg - sl))), float(np.max(np.abs(pv - sg))))

    rows = tuple(_map(one, cfg.orders))
    return SweepReport(("order", "deriv_vs_spectral", "pv_vs_spectral", "semigroup_vs_spectral",
                        "pv_vs_semigroup"), rows, {"period": float(cf.period)})


_DISPATCH = {
    "deriv_limits": _deriv_limits,
    "lap_limits": _lap_limits,
    "maximal_ratios": _maximal_ratios,
    "weight_scan": _weight_scan,
    "ftfc": _ftfc,
    "semigroup_suite": _semigroup_suite,
    "oracle_xcheck": _oracle_xcheck,
}


def run(cfg: ExperimentConfig) -> SweepReport:
    """Run one experiment. The metadata echoes the whole config, so a report can be reproduced from it."""
    quad = cfg.quad()
    try:
        rep = _DISPATCH[cfg.experiment](cfg, quad)
    except FraclabError as exc:
        if exc.args:
            exc.args = (f"{cfg.experiment} on {cfg.function!r}: {exc.args[0]}",) + exc.args[1:]
        raise
    meta = {**rep.metadata, "config": cfg.echo(), "version": __version__,
            "grid": {"t_min": cfg.t_min, "t_max": cfg.t_max, "n_points": cfg.n_points, "dim": cfg.dim}}
    return SweepReport(rep.columns, rep.rows, meta)
