"""Experiment configuration read from INI-style key-value files.

A config has an ``[experiment]`` section and optional ``[grid]``,
``[quadrature]`` and ``[output]`` sections::

    [experiment]
    type = deriv_limits
    function = gaussian
    weight = exp_decay
    p = 2
    orders = 0.5, 0.9, 0.99

    [grid]
    t_min = -6
    t_max = 6
    n_points = 241
"""

from __future__ import annotations

import configparser
import dataclasses
import math
from dataclasses import dataclass
from pathlib import Path

from fraclab.errors import ConfigInvalid, FraclabError
from fraclab.funcspace.catalog import lookup
from fraclab.funcspace.grid import Grid1D, GridND
from fraclab.quadrature import DEFAULT_QUAD, QuadratureSpec
from fraclab.weights.types import lookup_weight

EXPERIMENTS = ("deriv_limits", "lap_limits", "maximal_ratios", "weight_scan", "ftfc", "semigroup_suite",
               "oracle_xcheck")

_QUAD_FIELDS = {f.name: f.type for f in dataclasses.fields(QuadratureSpec)}


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    function: str = "gaussian"
    weight: str = "one"
    p: float = 2.0
    orders: tuple[float, ...] = ()
    dim: int = 1
    t_min: float = -6.0
    t_max: float = 6.0
    n_points: int = 241
    method: str = "pv"
    side: str = "minus"
    operator: str = "deriv"
    eps: tuple[float, ...] = (0.5, 0.25, 0.125, 0.0625, 0.03125)
    j_min: int = -10
    j_max: int = 10
    quadrature: tuple[tuple[str, object], ...] = ()
    output: str | None = None
    fmt: str = "csv"
    seed: int = 0

    def __post_init__(self) -> None:
        if self.experiment not in EXPERIMENTS:
            raise ConfigInvalid(f"unknown experiment {self.experiment!r}; choose from {', '.join(EXPERIMENTS)}")
        try:
            lookup(self.function)
            lookup_weight(self.weight, self.dim if self.dim > 1 else None)
        except FraclabError as exc:
            raise ConfigInvalid(str(exc)) from exc
        if not (self.p >= 1 and math.isfinite(self.p)):
            raise ConfigInvalid(f"p must be at least 1: {self.p}")
        if self.experiment not in ("weight_scan", "semigroup_suite"):
            if not self.orders:
                raise ConfigInvalid("the order list is empty")
            if any(not 0 < o < 1 for o in self.orders):
                raise ConfigInvalid(f"orders must lie in (0, 1): {self.orders}")
        if self.dim not in (1, 2, 3):
            raise ConfigInvalid(f"dimension must be 1, 2 or 3: {self.dim}")
        if not (self.t_max > self.t_min and self.n_points >= 3):
            raise ConfigInvalid("grid needs t_max > t_min and at least 3 points")
        if self.method not in ("pv", "semigroup"):
            raise ConfigInvalid(f"unknown method {self.method!r}")
        if self.operator not in ("deriv", "lap"):
            raise ConfigInvalid(f"unknown operator {self.operator!r}")
        if self.side not in ("minus", "plus", "two-sided"):
            raise ConfigInvalid(f"unknown side {self.side!r}")
        if self.fmt not in ("csv", "json"):
            raise ConfigInvalid(f"unknown output format {self.fmt!r}")
        if self.j_min > self.j_max:
            raise ConfigInvalid("j_min must not exceed j_max")
        self.quad()

    def grid(self) -> Grid1D | GridND:
        g = Grid1D(self.t_min, self.t_max, self.n_points)
        return g if self.dim == 1 else GridND((g,) * self.dim)

    def quad(self) -> QuadratureSpec:
        try:
            return dataclasses.replace(DEFAULT_QUAD, **dict(self.quadrature))
        except (TypeError, FraclabError) as exc:
            raise ConfigInvalid(f"bad quadrature override: {exc}") from exc

    def echo(self) -> dict:
        """All fields as plain JSON-compatible values."""
        out = dataclasses.asdict(self)
        out["orders"] = list(self.orders)
        out["eps"] = list(self.eps)
        out["quadrature"] = dict(self.quadrature)
        return out


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(x) for x in text.replace(";", ",").split(",") if x.strip())


def _coerce(name: str, text: str):
    kind = str(_QUAD_FIELDS[name])
    if "bool" in kind:
        return text.strip().lower() in ("1", "true", "yes", "on")
    if "tuple" in kind:
        return _floats(text)
    if "int" in kind:
        return int(text)
    if "float" in kind:
        return float(text)
    return text.strip()


def parse_config(text: str) -> ExperimentConfig:
    cp = configparser.ConfigParser()
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigInvalid(f"malformed config: {exc}") from exc
    if "experiment" not in cp:
        raise ConfigInvalid("missing [experiment] section")
    ex = cp["experiment"]
    kw: dict = {}
    try:
        if "type" not in ex:
            raise ConfigInvalid("missing experiment type")
        kw["experiment"] = ex["type"].strip()
        for key in ("function", "weight", "method", "side", "operator"):
            if key in ex:
                kw[key] = ex[key].strip()
        if "p" in ex:
            kw["p"] = float(ex["p"])
        if "orders" in ex:
            kw["orders"] = _floats(ex["orders"])
        if "eps" in ex:
            kw["eps"] = _floats(ex["eps"])
        for key in ("seed", "j_min", "j_max"):
            if key in ex:
                kw[key] = int(ex[key])
        if "grid" in cp:
            g = cp["grid"]
            for key, conv in (("t_min", float), ("t_max", float), ("n_points", int), ("dim", int)):
                if key in g:
                    kw[key] = conv(g[key])
        if "quadrature" in cp:
            over = []
            for key, val in cp["quadrature"].items():
                if key not in _QUAD_FIELDS:
                    raise ConfigInvalid(f"unknown quadrature key {key!r}")
                over.append((key, _coerce(key, val)))
            kw["quadrature"] = tuple(sorted(over))
        if "output" in cp:
            o = cp["output"]
            if "path" in o:
                kw["output"] = o["path"].strip()
            if "format" in o:
                kw["fmt"] = o["format"].strip()
    except ValueError as exc:
        raise ConfigInvalid(f"bad value: {exc}") from exc
    return ExperimentConfig(**kw)


def load_config(path: str | Path) -> ExperimentConfig:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ConfigInvalid(f"cannot read config {p}: {exc.strerror or exc}") from exc
    return parse_config(text)
